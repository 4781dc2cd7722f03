#include "odeim/interpolant.hpp"

#include <cmath>
#include <unordered_set>

#include <Eigen/SVD>

namespace odeim {

Interpolant build_interpolant(const Basis& basis, const PointSet& points) {
    const Index n = basis.dim();
    const Index big_n = basis.rows();
    const Index m = static_cast<Index>(points.size());
    if (m < n)
        throw ArgumentError("build_interpolant: need at least n sampling points, got " +
                            std::to_string(m) + " for n = " + std::to_string(n));
    std::unordered_set<Index> seen;
    for (Index p : points) {
        if (p < 0 || p >= big_n)
            throw ArgumentError("build_interpolant: index " + std::to_string(p) + " out of range");
        if (!seen.insert(p).second)
            throw ArgumentError("build_interpolant: repeated sampling index " + std::to_string(p));
    }
    Matrix sampled(m, n);
    for (Index t = 0; t < m; ++t) sampled.row(t) = basis.u.row(points[static_cast<std::size_t>(t)]);
    Eigen::JacobiSVD<Matrix> svd(sampled);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 1e-13 * smax))
        throw SingularError("build_interpolant: sampled basis is rank deficient; the point set cannot resolve the basis");
    return {basis, points, sampled, Eigen::HouseholderQR<Matrix>(sampled), smin, smax};
}

Vector approximate_coefficients(const Interpolant& interp, const Vector& sampled_values) {
    if (sampled_values.size() != static_cast<Index>(interp.points.size()))
        throw ArgumentError("approximate: expected " + std::to_string(interp.points.size()) +
                            " sampled values, got " + std::to_string(sampled_values.size()));
    return interp.factorization.solve(sampled_values);
}

ApproximateResult approximate(const Interpolant& interp, const Vector& sampled_values) {
    Vector c = approximate_coefficients(interp, sampled_values);
    return {c, interp.basis.u * c};
}

double selection_norm(const Interpolant& interp) { return 1.0 / interp.smin; }

double coherence(const Basis& basis) {
    const double max_row = basis.u.rowwise().squaredNorm().maxCoeff();
    return static_cast<double>(basis.rows()) / static_cast<double>(basis.dim()) * max_row;
}

NoiselessBound noiseless_error_bound(const Interpolant& interp, const Vector& f) {
    if (f.size() != interp.basis.rows())
        throw ArgumentError("noiseless_error_bound: vector length mismatch");
    const Matrix& u = interp.basis.u;
    const double projection_error = (f - u * (u.transpose() * f)).norm();
    const double bound = selection_norm(interp) * projection_error;
    Vector sampled(static_cast<Index>(interp.points.size()));
    for (std::size_t t = 0; t < interp.points.size(); ++t)
        sampled(static_cast<Index>(t)) = f(interp.points[t]);
    const double actual = (f - approximate(interp, sampled).full).norm();
    if (actual > bound + 1e-10 * f.norm())
        throw Error("noiseless_error_bound: reconstruction error exceeds the bound, numerical breakdown");
    return {bound, projection_error};
}

double deim_noise_bound(Index big_n, Index n, double sigma, double projection_error) {
    if (n < 1 || n > big_n)
        throw ArgumentError("deim_noise_bound: need 1 <= n <= N");
    if (sigma < 0.0 || projection_error < 0.0)
        throw ArgumentError("deim_noise_bound: sigma and projection error must be nonnegative");
    const double nn = static_cast<double>(n);
    const double factor = std::sqrt(1.0 + 4.0 * nn * static_cast<double>(big_n - n));
    return factor * (projection_error + std::sqrt(nn) * sigma);
}

BoundParameters make_bound_parameters(Index big_n, Index n, Index m, double delta,
                                      double mu, double sigma) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ArgumentError("bound parameters: delta must lie strictly inside (0, 1)");
    if (n < 1 || n > big_n || m < 1)
        throw ArgumentError("bound parameters: need 1 <= n <= N and m >= 1");
    if (!(mu > 0.0)) throw ArgumentError("bound parameters: coherence must be positive");
    if (sigma < 0.0) throw ArgumentError("bound parameters: sigma must be nonnegative");
    BoundParameters p;
    p.big_n = big_n;
    p.n = n;
    p.m = m;
    p.delta = delta;
    p.mu = mu;
    p.sigma = sigma;
    p.gamma = std::sqrt(8.0 * static_cast<double>(n) * mu *
                        std::log(2.0 * static_cast<double>(n) / delta) /
                        (3.0 * static_cast<double>(m)));
    return p;
}

double odeim_expected_bound(const BoundParameters& params, double projection_error) {
    if (projection_error < 0.0)
        throw ArgumentError("odeim_expected_bound: projection error must be nonnegative");
    const double n = static_cast<double>(params.n);
    const double big_n = static_cast<double>(params.big_n);
    const double m = static_cast<double>(params.m);
    const double threshold =
        8.0 / 3.0 * n * params.mu * std::log(2.0 * n / params.delta);
    if (!(params.gamma < 1.0))
        throw HypothesisError("odeim_expected_bound: gamma = " + std::to_string(params.gamma) +
                              " >= 1; the concentration bound is vacuous");
    if (m < threshold * (1.0 - 1e-12))
        throw HypothesisError("odeim_expected_bound: m = " + std::to_string(params.m) +
                              " below the sampling threshold (8/3) n mu ln(2n/delta) = " +
                              std::to_string(threshold));
    const double one_minus = 1.0 - params.gamma;
    const double projection_term =
        (1.0 + std::sqrt(n * params.mu / m) / one_minus) * projection_error;
    const double noise_term =
        params.sigma / std::sqrt(m) * std::sqrt(n * big_n) / one_minus;
    return projection_term + noise_term;
}

double wellposed_oversampling_fraction(Index big_n, Index n, double delta, double mu) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ArgumentError("wellposed_oversampling_fraction: delta must lie strictly inside (0, 1)");
    if (n < 1 || n > big_n)
        throw ArgumentError("wellposed_oversampling_fraction: need 1 <= n <= N");
    const double gamma_tilde =
        std::sqrt(8.0 / 3.0 * static_cast<double>(n) * mu *
                  std::log(2.0 * static_cast<double>(n) / delta) /
                  static_cast<double>(big_n));
    const double root = 0.5 * gamma_tilde + 0.5 * std::sqrt(gamma_tilde * gamma_tilde + 2.0);
    return root * root;
}

}  // namespace odeim
