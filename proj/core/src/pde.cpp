#include "odeim/models.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "odeim/error.hpp"

namespace odeim {

ReactionResult reaction(const Vector& u, double xi1, double xi2) {
    constexpr double kExpCap = 700.0;
    const double c = (0.1 * std::sin(xi1) + 2.0) * std::exp(-2.7 * xi1 * xi1);
    const double slope = 1.8 * xi2;
    ReactionResult out;
    out.value.resize(u.size());
    out.derivative.resize(u.size());
    for (Index i = 0; i < u.size(); ++i) {
        double z = slope * u(i);
        if (z > kExpCap) {
            z = kExpCap;
            out.saturated = true;
        }
        const double e = std::exp(z);
        out.value(i) = c * (e - 1.0);
        out.derivative(i) = c * slope * e;
    }
    return out;
}

FullOrderModel build_full_model(Index mesh_divisions) {
    if (mesh_divisions < 4)
        throw ArgumentError("full model: mesh_divisions must be at least 4");
    FullOrderModel model;
    const Index nx = mesh_divisions - 1;
    model.nx = nx;
    model.ny = nx;
    const double h = 1.0 / static_cast<double>(mesh_divisions);
    model.mesh_width = h;
    model.xs = Vector::LinSpaced(nx, h, 1.0 - h);
    model.ys = model.xs;
    const Index n = nx * nx;
    const double inv_h2 = 1.0 / (h * h);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(5 * n));
    model.forcing.resize(n);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (Index iy = 0; iy < nx; ++iy) {
        for (Index ix = 0; ix < nx; ++ix) {
            const Index k = iy * nx + ix;
            trips.emplace_back(k, k, -4.0 * inv_h2);
            if (ix > 0) trips.emplace_back(k, k - 1, inv_h2);
            if (ix + 1 < nx) trips.emplace_back(k, k + 1, inv_h2);
            if (iy > 0) trips.emplace_back(k, k - nx, inv_h2);
            if (iy + 1 < nx) trips.emplace_back(k, k + nx, inv_h2);
            model.forcing(k) =
                100.0 * std::sin(two_pi * model.xs(ix)) * std::sin(two_pi * model.ys(iy));
        }
    }
    model.linear_operator.resize(n, n);
    model.linear_operator.setFromTriplets(trips.begin(), trips.end());
    model.linear_operator.makeCompressed();
    return model;
}

namespace {

struct FullSystem {
    const FullOrderModel& model;
    double xi1;
    double xi2;
    Vector derivative;
    SparseMatrix jac;
    Eigen::SparseLU<SparseMatrix> lu;

    Vector residual(const Vector& x) {
        ReactionResult r = reaction(x, xi1, xi2);
        derivative = std::move(r.derivative);
        return model.linear_operator * x + r.value - model.forcing;
    }

    Vector step(const Vector&, const Vector& res) {
        jac = model.linear_operator;
        for (Index i = 0; i < derivative.size(); ++i) jac.coeffRef(i, i) += derivative(i);
        lu.compute(jac);
        if (lu.info() != Eigen::Success)
            throw SingularError("full-order Newton: Jacobian factorization failed");
        return lu.solve(-res);
    }
};

}  // namespace

Vector solve_full(const FullOrderModel& model, double xi1, double xi2,
                  const NewtonConfig& cfg, NewtonResult* detail) {
    if (model.size() == 0 || model.linear_operator.rows() != model.size())
        throw ArgumentError("full model: inconsistent dimensions");
    FullSystem sys{model, xi1, xi2, {}, {}, {}};
    NewtonResult result = newton_solve(sys, Vector::Zero(model.size()), cfg);
    if (!result.converged) {
        std::ostringstream msg;
        msg << "full-order Newton did not converge at xi = (" << xi1 << ", " << xi2
            << "): residual " << result.residual_norm << " after " << result.iterations
            << " iterations";
        throw NonconvergenceError(msg.str(), result.residual_norm, result.iterations);
    }
    if (detail) *detail = result;
    return std::move(result.x);
}

std::vector<Index> output_point_indices(const FullOrderModel& model) {
    std::vector<Index> idx;
    idx.reserve(12);
    const double h = model.mesh_width;
    auto snap = [h](double c, Index count) {
        Index k = static_cast<Index>(std::llround(c / h)) - 1;
        if (k < 0) k = 0;
        if (k >= count) k = count - 1;
        return k;
    };
    for (int i = 1; i <= 3; ++i) {
        const Index ix = snap(0.25 * i, model.nx);
        for (int j = 1; j <= 4; ++j) {
            const Index iy = snap(0.2 * j, model.ny);
            idx.push_back(iy * model.nx + ix);
        }
    }
    return idx;
}

ReducedModel build_rom(const FullOrderModel& model, Basis state_basis) {
    if (state_basis.rows() != model.size())
        throw ArgumentError("rom: basis rows must match model size");
    ReducedModel rom;
    const Matrix& v = state_basis.u;
    Matrix av = model.linear_operator * v;
    rom.reduced_linear = v.transpose() * av;
    rom.reduced_forcing = v.transpose() * model.forcing;
    rom.output_indices = output_point_indices(model);
    rom.output_map.resize(static_cast<Index>(rom.output_indices.size()), v.cols());
    for (size_t i = 0; i < rom.output_indices.size(); ++i)
        rom.output_map.row(static_cast<Index>(i)) = v.row(rom.output_indices[i]);
    rom.state_basis = std::move(state_basis);
    return rom;
}

ReducedModel build_rom(const FullOrderModel& model, const Matrix& snapshots, Index r) {
    return build_rom(model, pod_basis(snapshots, r));
}

ReducedModel attach_hyper_reduction(ReducedModel rom, Interpolant interp) {
    if (interp.basis.rows() != rom.state_basis.rows())
        throw ArgumentError("hyper reduction: nonlinear basis rows must match state basis rows");
    const Index m = static_cast<Index>(interp.points.size());
    const Matrix& v = rom.state_basis.u;
    Matrix pinv = interp.factorization.solve(Matrix::Identity(m, m));
    HyperReduction hyper;
    hyper.projected = (v.transpose() * interp.basis.u) * pinv;
    hyper.sampled_state_basis.resize(m, v.cols());
    for (Index i = 0; i < m; ++i)
        hyper.sampled_state_basis.row(i) = v.row(interp.points[static_cast<size_t>(i)]);
    hyper.interpolant = std::move(interp);
    rom.hyper = std::move(hyper);
    return rom;
}

namespace {

void perturb(Vector& value, double sigma, Rng* rng) {
    if (sigma <= 0.0) return;
    std::normal_distribution<double> g(0.0, sigma);
    for (Index i = 0; i < value.size(); ++i) value(i) += g(*rng);
}

struct GalerkinSystem {
    const ReducedModel& rom;
    double xi1;
    double xi2;
    double sigma;
    Rng* rng;
    Vector derivative;
    Eigen::PartialPivLU<Matrix> lu;

    Vector residual(const Vector& xr) {
        Vector u = rom.state_basis.u * xr;
        ReactionResult r = reaction(u, xi1, xi2);
        derivative = std::move(r.derivative);
        Vector value = std::move(r.value);
        perturb(value, sigma, rng);
        return rom.reduced_linear * xr + rom.state_basis.u.transpose() * value -
               rom.reduced_forcing;
    }

    Vector step(const Vector&, const Vector& res) {
        const Matrix& v = rom.state_basis.u;
        Matrix jac = rom.reduced_linear + v.transpose() * derivative.asDiagonal() * v;
        lu.compute(jac);
        return lu.solve(-res);
    }
};

// Online path: every temporary has length m or r, never the full dimension.
struct HyperSystem {
    const ReducedModel& rom;
    double xi1;
    double xi2;
    double sigma;
    Rng* rng;
    Vector derivative;
    Eigen::PartialPivLU<Matrix> lu;

    Vector residual(const Vector& xr) {
        const HyperReduction& h = *rom.hyper;
        Vector us = h.sampled_state_basis * xr;
        ReactionResult r = reaction(us, xi1, xi2);
        derivative = std::move(r.derivative);
        Vector value = std::move(r.value);
        perturb(value, sigma, rng);
        return rom.reduced_linear * xr + h.projected * value - rom.reduced_forcing;
    }

    Vector step(const Vector&, const Vector& res) {
        const HyperReduction& h = *rom.hyper;
        Matrix jac = rom.reduced_linear +
                     h.projected * derivative.asDiagonal() * h.sampled_state_basis;
        lu.compute(jac);
        return lu.solve(-res);
    }
};

}  // namespace

RomSolution solve_rom(const ReducedModel& rom, double xi1, double xi2,
                      const NewtonConfig& cfg, double sigma, Rng* rng,
                      bool allow_stagnation) {
    if (rom.dim() < 1) throw ArgumentError("rom solve: empty reduced system");
    if (sigma < 0.0) throw ArgumentError("rom solve: sigma must be nonnegative");
    if (sigma > 0.0 && rng == nullptr)
        throw ArgumentError("rom solve: noisy evaluation requires an rng");
    NewtonResult result;
    if (rom.hyper) {
        HyperSystem sys{rom, xi1, xi2, sigma, rng, {}, {}};
        result = newton_solve(sys, Vector::Zero(rom.dim()), cfg);
    } else {
        if (rom.state_basis.rows() == 0)
            throw ArgumentError("rom solve: state basis required without hyper-reduction");
        GalerkinSystem sys{rom, xi1, xi2, sigma, rng, {}, {}};
        result = newton_solve(sys, Vector::Zero(rom.dim()), cfg);
    }
    if (!result.converged && (!allow_stagnation || !std::isfinite(result.residual_norm))) {
        std::ostringstream msg;
        msg << "reduced Newton did not converge at xi = (" << xi1 << ", " << xi2
            << "): residual " << result.residual_norm << " after " << result.iterations
            << " iterations";
        throw NonconvergenceError(msg.str(), result.residual_norm, result.iterations);
    }
    RomSolution sol;
    sol.outputs = rom.output_map * result.x;
    sol.reduced_state = std::move(result.x);
    sol.residual_norm = result.residual_norm;
    sol.iterations = result.iterations;
    sol.converged = result.converged;
    return sol;
}

}  // namespace odeim
