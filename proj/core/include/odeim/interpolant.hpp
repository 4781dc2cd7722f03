#pragma once

#include <Eigen/QR>

#include "odeim/pod.hpp"
#include "odeim/selection.hpp"

namespace odeim {

// Gappy regression operator f_hat = U (P^T U)^+ P^T f. The sampled basis is
// factored once at construction; evaluation is reentrant.
struct Interpolant {
    Basis basis;
    PointSet points;
    Matrix sampled_basis;  // m x n rows of u at the points
    Eigen::HouseholderQR<Matrix> factorization;
    double smin = 0.0;
    double smax = 0.0;
};

struct ApproximateResult {
    Vector coefficients;  // length n
    Vector full;          // length N
};

// Throws SingularError when the sampled basis is rank deficient (smallest
// singular value at or below 1e-13 of the largest), ArgumentError on repeated
// or out-of-range indices.
Interpolant build_interpolant(const Basis& basis, const PointSet& points);

ApproximateResult approximate(const Interpolant& interp, const Vector& sampled_values);

// Least-squares coefficients only; the full reconstruction is basis * result.
Vector approximate_coefficients(const Interpolant& interp, const Vector& sampled_values);

// |(P^T U)^+|_2 = 1 / s_min(P^T U); always >= 1 for orthonormal bases with
// distinct points.
double selection_norm(const Interpolant& interp);

// mu = (N/n) max_i |row_i(u)|^2, in [1, N/n].
double coherence(const Basis& basis);

struct NoiselessBound {
    double bound;
    double projection_error;
};

// projection_error = |f - u u^T f|, bound = selection_norm * projection_error.
// Also verifies the reconstruction from noise-free samples satisfies the
// bound to within 1e-10 |f|.
NoiselessBound noiseless_error_bound(const Interpolant& interp, const Vector& f);

// sqrt(1 + 4 n (N - n)) * (projection_error + sqrt(n) * sigma): expected
// error of interpolation at n points under componentwise Gaussian noise.
double deim_noise_bound(Index big_n, Index n, double sigma, double projection_error);

struct BoundParameters {
    Index big_n = 0;
    Index n = 0;
    Index m = 0;
    double delta = 0.0;
    double mu = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
};

// gamma = sqrt(8 n mu ln(2n/delta) / (3 m)); validates delta in (0,1).
BoundParameters make_bound_parameters(Index big_n, Index n, Index m, double delta,
                                      double mu, double sigma);

// Expected-error bound for uniform-with-replacement sampling:
// (1 + sqrt(n mu / m) / (1 - gamma)) * projection_error
//   + (sigma / sqrt(m)) * sqrt(n N) / (1 - gamma).
// Throws HypothesisError when gamma >= 1 or m is below the sampling
// threshold (8/3) n mu ln(2n/delta).
double odeim_expected_bound(const BoundParameters& params, double projection_error);

// Smallest oversampling fraction alpha such that m = ceil(alpha N) uniform
// draws keep the selection norm at most 2 with probability >= 1 - delta.
// Returns alpha >= 1/2; alpha >= 1 means no feasible fraction exists.
double wellposed_oversampling_fraction(Index big_n, Index n, double delta, double mu);

}  // namespace odeim
