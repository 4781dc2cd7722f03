#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "experiment_util.hpp"
#include "odeim/error.hpp"
#include "odeim/experiments.hpp"
#include "odeim/interpolant.hpp"
#include "odeim/linalg.hpp"
#include "odeim/manifest.hpp"
#include "odeim/matrix_io.hpp"
#include "odeim/text_util.hpp"

namespace odeim {

namespace {

std::string cache_stem(const std::string& dir, Index mesh, Index grid) {
    std::ostringstream s;
    s << dir << "/pde_snapshots_m" << mesh << "_g" << grid;
    return s.str();
}

std::string format_status(const PdeParamStatus& st) {
    std::ostringstream s;
    s << dtos(st.xi1) << " " << dtos(st.xi2) << " " << (st.converged ? 1 : 0) << " "
      << dtos(st.residual) << " " << st.iterations;
    return s.str();
}

bool parse_status(const std::string& text, PdeParamStatus* out) {
    std::istringstream s(text);
    int converged = 0;
    if (!(s >> out->xi1 >> out->xi2 >> converged >> out->residual >> out->iterations))
        return false;
    out->converged = converged != 0;
    return true;
}

bool load_cached_snapshots(const std::string& stem, const FullOrderModel& model,
                           Index grid, PdeSnapshotSet* out) {
    namespace fs = std::filesystem;
    const std::string states_path = stem + "_states.dmat";
    const std::string nonlinear_path = stem + "_nonlinear.dmat";
    const std::string manifest_path = stem + "_manifest.txt";
    if (!fs::exists(states_path) || !fs::exists(nonlinear_path) ||
        !fs::exists(manifest_path))
        return false;
    try {
        const Manifest manifest = read_manifest_file(manifest_path);
        const auto count = manifest_value(manifest, "param_count");
        if (!count || std::stoll(*count) != static_cast<long long>(grid * grid))
            return false;
        PdeSnapshotSet set;
        set.statuses.resize(static_cast<size_t>(grid * grid));
        for (Index k = 0; k < grid * grid; ++k) {
            const auto entry = manifest_value(manifest, "param_" + std::to_string(k));
            if (!entry || !parse_status(*entry, &set.statuses[static_cast<size_t>(k)]))
                return false;
        }
        set.states = read_matrix(states_path);
        set.nonlinear = read_matrix(nonlinear_path);
        Index converged = 0;
        for (const PdeParamStatus& st : set.statuses)
            if (st.converged) ++converged;
        if (set.states.rows() != model.size() || set.nonlinear.rows() != model.size() ||
            set.states.cols() != converged || set.nonlinear.cols() != converged)
            return false;
        *out = std::move(set);
        return true;
    } catch (...) {
        return false;
    }
}

void store_cached_snapshots(const std::string& dir, const std::string& stem,
                            Index mesh, Index grid, const NewtonConfig& cfg,
                            const PdeSnapshotSet& set) {
    std::filesystem::create_directories(dir);
    write_matrix_binary(set.states, stem + "_states.dmat");
    write_matrix_binary(set.nonlinear, stem + "_nonlinear.dmat");
    Manifest manifest;
    manifest.emplace_back("mesh_divisions", std::to_string(mesh));
    manifest.emplace_back("snapshot_grid", std::to_string(grid));
    manifest.emplace_back("residual_tol", dtos(cfg.residual_tol));
    manifest.emplace_back("param_count", std::to_string(grid * grid));
    for (size_t k = 0; k < set.statuses.size(); ++k)
        manifest.emplace_back("param_" + std::to_string(k), format_status(set.statuses[k]));
    write_manifest(manifest, stem + "_manifest.txt");
}

[[noreturn]] void throw_snapshot_failure(const PdeParamStatus& st) {
    std::ostringstream msg;
    msg << "snapshot generation: Newton did not converge at xi = (" << st.xi1 << ", "
        << st.xi2 << "): residual " << st.residual << " after " << st.iterations
        << " iterations";
    throw NonconvergenceError(msg.str(), st.residual, st.iterations);
}

struct PdeCell {
    Method method = Method::qdeim;
    Index n = 0;
    Index m = 0;
    Index id = 0;
    std::string status = "ok";
    std::optional<PointSet> cached_points;      // deterministic selectors
    std::optional<ReducedModel> cached_rom;     // deterministic selectors
};

Basis slice_basis(const Basis& full, Index n) {
    return Basis{full.u.leftCols(n), full.singular_values.head(n)};
}

}  // namespace

PdeSnapshotSet generate_pde_snapshots(const FullOrderModel& model, Index grid,
                                      const NewtonConfig& cfg, bool skip_nonconverged,
                                      const std::string& cache_dir, bool* cache_hit) {
    if (grid < 2) throw ArgumentError("pde snapshots: grid must be at least 2 per axis");
    if (cache_hit) *cache_hit = false;
    const std::string stem =
        cache_dir.empty() ? std::string() : cache_stem(cache_dir, model.nx + 1, grid);

    PdeSnapshotSet set;
    bool loaded = false;
    if (!stem.empty() && load_cached_snapshots(stem, model, grid, &set)) {
        loaded = true;
        if (cache_hit) *cache_hit = true;
    }

    if (!loaded) {
        constexpr double half_pi = std::numbers::pi / 2.0;
        const Vector axis = Vector::LinSpaced(grid, -half_pi, half_pi);
        const Index count = grid * grid;
        set.statuses.assign(static_cast<size_t>(count), PdeParamStatus{});
        Matrix states(model.size(), count);
        Matrix nonlinear(model.size(), count);
        parallel_for(count, 0, [&](Index k) {
            const double xi1 = axis(k / grid);
            const double xi2 = axis(k % grid);
            PdeParamStatus& st = set.statuses[static_cast<size_t>(k)];
            st.xi1 = xi1;
            st.xi2 = xi2;
            try {
                NewtonResult detail;
                const Vector u = solve_full(model, xi1, xi2, cfg, &detail);
                st.converged = true;
                st.residual = detail.residual_norm;
                st.iterations = detail.iterations;
                states.col(k) = u;
                nonlinear.col(k) = reaction(u, xi1, xi2).value;
            } catch (const NonconvergenceError& e) {
                st.converged = false;
                st.residual = e.residual;
                st.iterations = e.iterations;
            }
        });
        Index converged = 0;
        for (const PdeParamStatus& st : set.statuses)
            if (st.converged) ++converged;
        set.states.resize(model.size(), converged);
        set.nonlinear.resize(model.size(), converged);
        Index col = 0;
        for (Index k = 0; k < count; ++k) {
            if (!set.statuses[static_cast<size_t>(k)].converged) continue;
            set.states.col(col) = states.col(k);
            set.nonlinear.col(col) = nonlinear.col(k);
            ++col;
        }
        if (!stem.empty())
            store_cached_snapshots(cache_dir, stem, model.nx + 1, grid, cfg, set);
    }

    if (!skip_nonconverged) {
        for (const PdeParamStatus& st : set.statuses)
            if (!st.converged) throw_snapshot_failure(st);
    }
    return set;
}

ErrorTable run_pde_experiment(const ExperimentConfig& cfg, PdeRunInfo* info) {
    validate_experiment_config(cfg);
    const PdeParams& pp = cfg.pde;
    if (pp.pod_dim < 1) throw ArgumentError("pde experiment: pod dimension must be positive");

    const FullOrderModel model = build_full_model(pp.mesh_divisions);
    const NewtonConfig ncfg;
    bool cache_hit = false;
    const PdeSnapshotSet snaps = generate_pde_snapshots(
        model, pp.snapshot_grid, ncfg, pp.skip_nonconverged, pp.cache_dir, &cache_hit);
    if (info) {
        info->snapshot_statuses = snaps.statuses;
        info->cache_hit = cache_hit;
    }
    if (snaps.states.cols() < 2)
        throw Error("pde experiment: not enough converged snapshots");
    if (pp.pod_dim > snaps.states.cols())
        throw ArgumentError("pde experiment: pod dimension exceeds the snapshot count");

    const ReducedModel rom = build_rom(model, pod_basis(snaps.states, pp.pod_dim));
    const SvdResult fsvd = thin_svd(snaps.nonlinear);
    const Index frank = numerical_rank(fsvd.singular_values);
    const Basis fbasis = pod_basis_from_svd(fsvd, frank);

    // Held-out parameters: the odd nodes of a 9-point axis, off the snapshot
    // lattice on both axes.
    const Vector axis9 =
        Vector::LinSpaced(9, -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    std::vector<double> taxis = {axis9(1), axis9(3), axis9(5), axis9(7)};
    const Index test_count = static_cast<Index>(taxis.size() * taxis.size());
    std::vector<PdeParamStatus> tstat(static_cast<size_t>(test_count));
    std::vector<Vector> ref_outputs(static_cast<size_t>(test_count));
    parallel_for(test_count, cfg.jobs, [&](Index k) {
        const double xi1 = taxis[static_cast<size_t>(k) / taxis.size()];
        const double xi2 = taxis[static_cast<size_t>(k) % taxis.size()];
        PdeParamStatus& st = tstat[static_cast<size_t>(k)];
        st.xi1 = xi1;
        st.xi2 = xi2;
        try {
            const RomSolution sol = solve_rom(rom, xi1, xi2, ncfg);
            st.converged = true;
            st.residual = sol.residual_norm;
            st.iterations = sol.iterations;
            ref_outputs[static_cast<size_t>(k)] = sol.outputs;
        } catch (const NonconvergenceError& e) {
            st.converged = false;
            st.residual = e.residual;
            st.iterations = e.iterations;
        }
    });
    if (info) info->test_statuses = tstat;

    std::vector<std::pair<double, double>> test_params;
    std::vector<Vector> refs;
    for (Index k = 0; k < test_count; ++k) {
        if (!tstat[static_cast<size_t>(k)].converged) continue;
        test_params.emplace_back(tstat[static_cast<size_t>(k)].xi1,
                                 tstat[static_cast<size_t>(k)].xi2);
        refs.push_back(ref_outputs[static_cast<size_t>(k)]);
    }
    if (refs.empty()) throw Error("pde experiment: no feasible test parameters");

    const Index fraction_base = pp.mesh_divisions * pp.mesh_divisions;
    std::vector<PdeCell> cells;
    cells.reserve(cfg.methods.size() * cfg.n_grid.size());
    for (Method method : cfg.methods) {
        for (Index n : cfg.n_grid) {
            PdeCell cell;
            cell.method = method;
            cell.n = n;
            cell.m = cell_point_count(cfg, method, n, fraction_base);
            cell.id = static_cast<Index>(cells.size());
            if (n > frank)
                cell.status = "rank-deficient";
            else if (cell.m < n)
                cell.status = "undersampled";
            else if (cell.m > model.size())
                cell.status = "m-exceeds-N";
            cells.push_back(std::move(cell));
        }
    }
    const Index cell_count = static_cast<Index>(cells.size());

    parallel_for(cell_count, cfg.jobs, [&](Index ci) {
        PdeCell& cell = cells[static_cast<size_t>(ci)];
        if (cell.status != "ok" || stochastic_method(cell.method)) return;
        try {
            cell.cached_points =
                select_points(cell.method, slice_basis(fbasis, cell.n), cell.m, 0);
        } catch (const Error&) {
            cell.status = "selection-failed";
        }
    });

    ErrorTable table;
    table.cells.resize(static_cast<size_t>(cell_count) *
                       static_cast<size_t>(cfg.replicates));

    for (int rep = 0; rep < cfg.replicates; ++rep) {
        parallel_for(cell_count, cfg.jobs, [&](Index ci) {
            PdeCell& cell = cells[static_cast<size_t>(ci)];
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
                const ReducedModel* hyper_rom = nullptr;
                ReducedModel local_rom;
                if (stochastic_method(cell.method)) {
                    const PointSet points = select_points(
                        cell.method, slice_basis(fbasis, cell.n), cell.m,
                        derive_seed(cfg.seed, 201, static_cast<std::uint64_t>(cell.id),
                                    static_cast<std::uint64_t>(rep)));
                    local_rom = attach_hyper_reduction(
                        rom, build_interpolant(slice_basis(fbasis, cell.n), points));
                    hyper_rom = &local_rom;
                } else {
                    if (!cell.cached_rom) {
                        cell.cached_rom = attach_hyper_reduction(
                            rom, build_interpolant(slice_basis(fbasis, cell.n),
                                                   *cell.cached_points));
                    }
                    hyper_rom = &*cell.cached_rom;
                }
                row.selection_norm = selection_norm(hyper_rom->hyper->interpolant);

                Rng nrng(derive_seed(cfg.seed, 401, static_cast<std::uint64_t>(cell.id),
                                     static_cast<std::uint64_t>(rep)));
                std::vector<Vector> approx;
                approx.reserve(test_params.size());
                for (const auto& [xi1, xi2] : test_params) {
                    const RomSolution sol =
                        solve_rom(*hyper_rom, xi1, xi2, ncfg, cfg.sigma,
                                  cfg.sigma > 0.0 ? &nrng : nullptr,
                                  /*allow_stagnation=*/true);
                    approx.push_back(sol.outputs);
                }
                row.error = averaged_relative_l2(refs, approx);
            } catch (const NonconvergenceError&) {
                row.status = "newton-failed";
                row.error = std::numeric_limits<double>::quiet_NaN();
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
