#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "odeim/error.hpp"
#include "odeim/experiments.hpp"
#include "odeim/interpolant.hpp"
#include "odeim/linalg.hpp"

namespace odeim {

namespace {

// Haar-distributed orthonormal N x n matrix: QR of a Gaussian matrix with the
// R-diagonal sign fix.
Matrix haar_basis(Index big_n, Index n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(big_n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < big_n; ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(big_n, n);
    const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

}  // namespace

BoundReport verify_probabilistic_bounds(Index big_n, Index n, double delta, Index trials,
                                        std::uint64_t seed, const VerifyOptions& opts) {
    if (n < 1 || n > big_n)
        throw ArgumentError("bound verification: need 1 <= n <= N");
    if (!(delta > 0.0 && delta < 1.0))
        throw ArgumentError("bound verification: delta must lie strictly inside (0, 1)");
    if (trials < 1) throw ArgumentError("bound verification: need at least one trial");
    if (opts.sigma < 0.0)
        throw ArgumentError("bound verification: sigma must be nonnegative");
    if (!(opts.m_scale > 0.0))
        throw ArgumentError("bound verification: m_scale must be positive");
    if (opts.projection_norm < 0.0)
        throw ArgumentError("bound verification: projection_norm must be nonnegative");

    BoundReport report;
    report.big_n = big_n;
    report.n = n;
    report.delta = delta;
    report.trials = trials;
    report.sigma = opts.sigma;
    report.projection_norm = opts.projection_norm;
    report.trial_results.reserve(static_cast<size_t>(trials));

    Index lemma_violations = 0;
    Index expected_violations = 0;
    double error_sum = 0.0;
    double bound_sum = 0.0;
    double contribution_sum = 0.0;

    for (Index trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, 501, static_cast<std::uint64_t>(trial)));
        std::normal_distribution<double> gauss(0.0, 1.0);

        const Matrix q = haar_basis(big_n, n, rng);
        const Basis basis{q, Vector::Ones(n)};
        const double mu = coherence(basis);
        const double threshold = (8.0 / 3.0) * static_cast<double>(n) * mu *
                                 std::log(2.0 * static_cast<double>(n) / delta);
        // Strictly above the (scaled) threshold so that gamma < 1 whenever
        // m_scale >= 1.
        const Index m = static_cast<Index>(std::floor(threshold * opts.m_scale)) + 1;
        const BoundParameters params = make_bound_parameters(big_n, n, m, delta, mu, opts.sigma);

        BoundTrial t;
        t.mu = mu;
        t.gamma = params.gamma;
        t.m = m;
        t.lemma_bound = static_cast<double>(big_n) /
                        ((1.0 - params.gamma) * static_cast<double>(m));

        const std::vector<Index> draws = sample_with_replacement(big_n, m, rng);
        Matrix sampled(m, n);
        for (Index i = 0; i < m; ++i) sampled.row(i) = q.row(draws[static_cast<size_t>(i)]);
        const double smin = min_singular_value(sampled);
        t.inverse_norm = smin > 0.0 ? 1.0 / (smin * smin)
                                    : std::numeric_limits<double>::infinity();
        t.lemma_violated = t.inverse_norm > t.lemma_bound;

        Vector c(n);
        for (Index i = 0; i < n; ++i) c(i) = gauss(rng);
        Vector w(big_n);
        for (Index i = 0; i < big_n; ++i) w(i) = gauss(rng);
        w -= q * (q.transpose() * w).eval();
        const double wn = w.norm();
        if (wn > 0.0 && opts.projection_norm > 0.0)
            w *= opts.projection_norm / wn;
        else
            w.setZero();
        const Vector f = q * c + w;

        Vector sampled_values(m);
        for (Index i = 0; i < m; ++i) sampled_values(i) = f(draws[static_cast<size_t>(i)]);
        if (opts.sigma > 0.0) {
            Vector noisy = sampled_values;
            std::normal_distribution<double> noise(0.0, opts.sigma);
            for (Index i = 0; i < m; ++i) noisy(i) += noise(rng);
            const Vector coef = solve_least_squares(sampled, noisy);
            t.error = (f - q * coef).norm();
            const Vector coef0 = solve_least_squares(sampled, sampled_values);
            t.noise_free_error = (f - q * coef0).norm();
        } else {
            const Vector coef = solve_least_squares(sampled, sampled_values);
            t.error = (f - q * coef).norm();
            t.noise_free_error = t.error;
        }
        t.expected_bound = odeim_expected_bound(params, opts.projection_norm);
        t.expected_bound_violated = t.error > t.expected_bound;

        if (t.lemma_violated) ++lemma_violations;
        if (t.expected_bound_violated) ++expected_violations;
        error_sum += t.error;
        bound_sum += t.expected_bound;
        contribution_sum += t.error - t.noise_free_error;
        report.trial_results.push_back(std::move(t));
    }

    const double k = static_cast<double>(trials);
    report.lemma_violation_frequency = static_cast<double>(lemma_violations) / k;
    report.expected_bound_violation_frequency =
        static_cast<double>(expected_violations) / k;
    report.mean_error = error_sum / k;
    report.mean_expected_bound = bound_sum / k;
    report.mean_noise_contribution = contribution_sum / k;
    return report;
}

}  // namespace odeim
