#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "experiment_util.hpp"
#include "odeim/error.hpp"
#include "odeim/experiments.hpp"
#include "odeim/interpolant.hpp"
#include "odeim/linalg.hpp"

namespace odeim {

namespace {

struct ToyCell {
    Method method = Method::qdeim;
    Index n = 0;
    Index m = 0;
    Index id = 0;
    std::string status = "ok";
    std::optional<PointSet> cached_points;  // deterministic selectors only
};

Basis slice_basis(const Basis& full, Index n) {
    return Basis{full.u.leftCols(n), full.singular_values.head(n)};
}

}  // namespace

ErrorTable run_toy_experiment(const ExperimentConfig& cfg) {
    validate_experiment_config(cfg);
    const ToyParams& tp = cfg.toy;
    if (tp.training_count < 2 || tp.test_count < 1)
        throw ArgumentError("toy experiment: need at least 2 training and 1 test parameters");
    ToyFunctionSpec spec;
    spec.grid_size = tp.grid_size;
    const Vector x = toy_grid(spec);
    const Index big_n = x.size();
    const Vector train =
        Vector::LinSpaced(tp.training_count, spec.parameter_min, spec.parameter_max);

    Matrix snapshots(big_n, tp.training_count);
    parallel_for(tp.training_count, cfg.jobs,
                 [&](Index j) { snapshots.col(j) = toy_function_at(x, train(j)); });

    const SvdResult svd = thin_svd(snapshots);
    const Index rank = numerical_rank(svd.singular_values);
    const Basis full_basis = pod_basis_from_svd(svd, rank);

    std::vector<ToyCell> cells;
    cells.reserve(cfg.methods.size() * cfg.n_grid.size());
    for (Method method : cfg.methods) {
        for (Index n : cfg.n_grid) {
            ToyCell cell;
            cell.method = method;
            cell.n = n;
            cell.m = cell_point_count(cfg, method, n, big_n);
            cell.id = static_cast<Index>(cells.size());
            if (n > rank)
                cell.status = "rank-deficient";
            else if (cell.m < n)
                cell.status = "undersampled";
            else if (cell.m > big_n)
                cell.status = "m-exceeds-N";
            cells.push_back(std::move(cell));
        }
    }
    const Index cell_count = static_cast<Index>(cells.size());

    parallel_for(cell_count, cfg.jobs, [&](Index ci) {
        ToyCell& cell = cells[static_cast<size_t>(ci)];
        if (cell.status != "ok" || stochastic_method(cell.method)) return;
        try {
            cell.cached_points =
                select_points(cell.method, slice_basis(full_basis, cell.n), cell.m, 0);
        } catch (const Error&) {
            cell.status = "selection-failed";
        }
    });

    ErrorTable table;
    table.cells.resize(static_cast<size_t>(cell_count) *
                       static_cast<size_t>(cfg.replicates));

    for (int rep = 0; rep < cfg.replicates; ++rep) {
        Rng prng(derive_seed(cfg.seed, 101, static_cast<std::uint64_t>(rep)));
        std::uniform_real_distribution<double> draw(spec.parameter_min, spec.parameter_max);
        Vector test_params(tp.test_count);
        for (Index t = 0; t < tp.test_count; ++t) test_params(t) = draw(prng);

        Matrix truth(big_n, tp.test_count);
        parallel_for(tp.test_count, cfg.jobs,
                     [&](Index t) { truth.col(t) = toy_function_at(x, test_params(t)); });
        const Vector truth_norms = truth.colwise().norm();
        for (Index t = 0; t < tp.test_count; ++t)
            if (truth_norms(t) == 0.0)
                throw Error("toy experiment: zero-norm test function");

        parallel_for(cell_count, cfg.jobs, [&](Index ci) {
            const ToyCell& cell = cells[static_cast<size_t>(ci)];
            CellResult row;
            row.method = cell.method;
            row.n = cell.n;
            row.m = cell.m;
            row.replicate = rep;
            row.status = cell.status;
            auto store = [&] {
                table.cells[static_cast<size_t>(cell.id) *
                                static_cast<size_t>(cfg.replicates) +
                            static_cast<size_t>(rep)] = row;
            };
            if (row.status != "ok") {
                store();
                return;
            }
            try {
                const Basis basis = slice_basis(full_basis, cell.n);
                PointSet points;
                if (stochastic_method(cell.method)) {
                    points = select_points(
                        cell.method, basis, cell.m,
                        derive_seed(cfg.seed, 201, static_cast<std::uint64_t>(cell.id),
                                    static_cast<std::uint64_t>(rep)));
                } else {
                    points = *cell.cached_points;
                }
                const Interpolant interp = build_interpolant(basis, points);
                row.selection_norm = selection_norm(interp);

                Matrix sampled(cell.m, tp.test_count);
                for (Index i = 0; i < cell.m; ++i)
                    sampled.row(i) = truth.row(points[static_cast<size_t>(i)]);
                if (cfg.sigma > 0.0) {
                    Rng nrng(derive_seed(cfg.seed, 301,
                                         static_cast<std::uint64_t>(cell.id),
                                         static_cast<std::uint64_t>(rep)));
                    std::normal_distribution<double> g(0.0, cfg.sigma);
                    for (Index t = 0; t < tp.test_count; ++t)
                        for (Index i = 0; i < cell.m; ++i) sampled(i, t) += g(nrng);
                }
                const Matrix coef = interp.factorization.solve(sampled);

                double acc = 0.0;
                constexpr Index kChunk = 128;
                for (Index t0 = 0; t0 < tp.test_count; t0 += kChunk) {
                    const Index width = std::min(kChunk, tp.test_count - t0);
                    const Matrix recon = interp.basis.u * coef.middleCols(t0, width);
                    for (Index j = 0; j < width; ++j)
                        acc += (recon.col(j) - truth.col(t0 + j)).norm() /
                               truth_norms(t0 + j);
                }
                row.error = acc / static_cast<double>(tp.test_count);
            } catch (const Error&) {
                row.status = "solve-failed";
                row.error = std::numeric_limits<double>::quiet_NaN();
            }
            store();
        });
    }
    return table;
}

}  // namespace odeim
