#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "odeim/interpolant.hpp"
#include "odeim/newton.hpp"
#include "odeim/pod.hpp"
#include "odeim/rng.hpp"

namespace odeim {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Parametrized analytic function on an inclusive equidistant grid.
struct ToyFunctionSpec {
    Index grid_size = 8192;
    double domain_min = -2.0 * std::numbers::pi;
    double domain_max = 2.0 * std::numbers::pi;
    double parameter_min = 1.0;
    double parameter_max = 3.0;
};

Vector toy_grid(const ToyFunctionSpec& spec);
double toy_function_value(double x, double xi);
// Componentwise evaluation at explicit coordinates.
Vector toy_function_at(const Vector& x, double xi);
// Evaluation over the spec grid; validates xi against the parameter domain.
Vector toy_function(const ToyFunctionSpec& spec, double xi);

struct ReactionResult {
    Vector value;
    Vector derivative;  // d value / d u, componentwise
    bool saturated = false;
};

// f(u; xi) = (0.1 sin(xi1) + 2) exp(-2.7 xi1^2) (exp(1.8 xi2 u) - 1).
// Exponents are clamped at 700 and flagged; a saturated evaluation signals a
// divergent Newton iterate rather than a hard error.
ReactionResult reaction(const Vector& u, double xi1, double xi2);

// Unit-square diffusion model: 5-point Laplacian over the interior nodes of
// an equidistant mesh, homogeneous Dirichlet rows eliminated.
struct FullOrderModel {
    SparseMatrix linear_operator;  // N x N, symmetric negative definite
    Vector forcing;                // 100 sin(2 pi x1) sin(2 pi x2) at interior nodes
    double mesh_width = 0.0;
    Index nx = 0;
    Index ny = 0;
    Vector xs;  // interior coordinates along each axis
    Vector ys;
    Index size() const { return nx * ny; }
};

// mesh_divisions = 1/h; requires mesh_divisions >= 4. Interior nodes are
// indexed x-fastest: idx = iy * nx + ix.
FullOrderModel build_full_model(Index mesh_divisions);

// Newton with Armijo backtracking from a zero initial guess on
// A x + f(x; xi) - b = 0. Throws NonconvergenceError carrying the final
// residual when the tolerance is not reached. `detail` (optional) receives
// iteration count and residual norm on success.
Vector solve_full(const FullOrderModel& model, double xi1, double xi2,
                  const NewtonConfig& cfg = {}, NewtonResult* detail = nullptr);

// Offline data for evaluating the reduced nonlinear term from m sampled
// components only.
struct HyperReduction {
    Interpolant interpolant;
    Matrix projected;            // r x m: V^T U (P^T U)^+
    Matrix sampled_state_basis;  // m x r: rows of V at the sampling points
};

struct ReducedModel {
    Matrix reduced_linear;  // r x r: V^T A V
    Basis state_basis;      // V, N x r
    Vector reduced_forcing;  // V^T b
    Matrix output_map;       // rows of V at the output indices
    std::vector<Index> output_indices;
    std::optional<HyperReduction> hyper;
    Index dim() const { return reduced_linear.rows(); }
};

// The 12 interior nodes nearest the points [0.25 i, 0.2 j], i in {1,2,3}
// (outer), j in {1,2,3,4} (inner).
std::vector<Index> output_point_indices(const FullOrderModel& model);

ReducedModel build_rom(const FullOrderModel& model, Basis state_basis);
ReducedModel build_rom(const FullOrderModel& model, const Matrix& snapshots, Index r);

// Precomputes the projected operator and sampled rows of V; the resulting
// online nonlinear path touches only m components per evaluation.
ReducedModel attach_hyper_reduction(ReducedModel rom, Interpolant interp);

struct RomSolution {
    Vector reduced_state;
    Vector outputs;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Reduced Newton solve. sigma > 0 adds fresh Gaussian noise to every sampled
// nonlinear evaluation (each Newton iteration and each line-search trial) and
// requires rng. With allow_stagnation the best iterate is returned when the
// iteration stalls above the tolerance (the noise floor); divergence to a
// non-finite residual still throws NonconvergenceError.
RomSolution solve_rom(const ReducedModel& rom, double xi1, double xi2,
                      const NewtonConfig& cfg = {}, double sigma = 0.0,
                      Rng* rng = nullptr, bool allow_stagnation = false);

}  // namespace odeim
