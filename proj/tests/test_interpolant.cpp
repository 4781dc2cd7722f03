#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "odeim/interpolant.hpp"
#include "odeim/selection.hpp"
#include "test_data.hpp"

using namespace odeim;

namespace {

Basis make_basis(const Matrix& u) { return Basis{u, Vector::Ones(u.cols())}; }

}  // namespace

TEST_CASE("interpolant on an identity basis passes values through") {
    const Basis basis = make_basis(Matrix::Identity(3, 2));
    const Interpolant interp = build_interpolant(basis, {0, 1});
    CHECK((interp.sampled_basis - Matrix::Identity(2, 2)).norm() == 0.0);
    Vector v(2);
    v << 1.0, 2.0;
    const ApproximateResult res = approximate(interp, v);
    CHECK(std::abs(res.full(0) - 1.0) <= 1e-14);
    CHECK(std::abs(res.full(1) - 2.0) <= 1e-14);
    CHECK(std::abs(res.full(2)) <= 1e-14);
    CHECK(std::abs(selection_norm(interp) - 1.0) <= 1e-14);
}

TEST_CASE("interpolant matches the frozen least-squares solution") {
    const Basis basis = make_basis(testdata::u6());
    const Interpolant interp = build_interpolant(basis, {0, 2, 3, 5});
    CHECK(std::abs(interp.smin - 0.43454324937474986) <= 1e-12);
    CHECK(std::abs(selection_norm(interp) - 1.0 / 0.43454324937474986) <= 1e-12);

    Vector v(4);
    v << 0.3, -1.2, 0.5, 2.0;
    const ApproximateResult res = approximate(interp, v);
    REQUIRE(res.coefficients.size() == 2);
    CHECK(std::abs(res.coefficients(0) - 0.34963686704685465) <= 1e-12);
    CHECK(std::abs(res.coefficients(1) - -0.45760942670276439) <= 1e-12);
    CHECK(std::abs(res.full.norm() - 0.57589263426924686) <= 1e-12);
    CHECK((res.full - basis.u * res.coefficients).norm() <= 1e-14);
    CHECK((approximate_coefficients(interp, v) - res.coefficients).norm() == 0.0);
}

TEST_CASE("square point sets interpolate the sampled values exactly") {
    const Basis basis = make_basis(testdata::u6());
    const PointSet pts = qdeim(basis);
    const Interpolant interp = build_interpolant(basis, pts);
    Vector v(2);
    v << 0.3, 0.7;
    const ApproximateResult res = approximate(interp, v);
    for (std::size_t t = 0; t < pts.size(); ++t)
        CHECK(std::abs(res.full(pts[t]) - v(static_cast<Index>(t))) <= 1e-10 * v.norm());
}

TEST_CASE("sampling every point reproduces the orthogonal projection") {
    const Basis basis = pod_basis(testdata::dense(10, 4), 3);
    PointSet all(10);
    std::iota(all.begin(), all.end(), Index{0});
    const Interpolant interp = build_interpolant(basis, all);
    CHECK(std::abs(selection_norm(interp) - 1.0) <= 1e-12);

    Vector f(10);
    for (Index i = 0; i < 10; ++i) f(i) = std::cos(0.7 * static_cast<double>(i) + 0.2);
    const Vector projected = basis.u * (basis.u.transpose() * f);
    const ApproximateResult res = approximate(interp, f);
    CHECK((res.full - projected).norm() <= 1e-10 * f.norm());
}

TEST_CASE("selection_norm equals the reciprocal sampled singular value") {
    Matrix u(2, 1);
    u << 0.5, std::sqrt(0.75);
    const Interpolant interp = build_interpolant(make_basis(u), {0});
    CHECK(std::abs(selection_norm(interp) - 2.0) <= 1e-12);

    const Basis basis = make_basis(testdata::u30());
    const PointSet pts = odeim_e(basis, 9);
    const Interpolant wide = build_interpolant(basis, pts);
    Matrix sampled(9, 4);
    for (Index t = 0; t < 9; ++t) sampled.row(t) = basis.u.row(pts[static_cast<std::size_t>(t)]);
    CHECK(std::abs(wide.smin - min_singular_value(sampled)) <= 1e-12);
}

TEST_CASE("build_interpolant validates the point set") {
    const Basis basis = make_basis(testdata::u6());
    CHECK_THROWS_AS(build_interpolant(basis, {0}), ArgumentError);
    CHECK_THROWS_AS(build_interpolant(basis, {0, 0}), ArgumentError);
    CHECK_THROWS_AS(build_interpolant(basis, {0, 6}), ArgumentError);
    CHECK_THROWS_AS(build_interpolant(basis, {-1, 2}), ArgumentError);

    const Basis id = make_basis(Matrix::Identity(4, 2));
    CHECK_THROWS_AS(build_interpolant(id, {2, 3}), SingularError);

    const Interpolant interp = build_interpolant(basis, {1, 4});
    CHECK_THROWS_AS(approximate(interp, Vector::Ones(3)), ArgumentError);
}

TEST_CASE("coherence of structured bases") {
    CHECK(std::abs(coherence(make_basis(Matrix::Identity(4, 2))) - 2.0) <= 1e-14);

    Matrix hadamard(4, 2);
    hadamard << 0.5,  0.5,
                0.5, -0.5,
                0.5,  0.5,
                0.5, -0.5;
    CHECK(std::abs(coherence(make_basis(hadamard)) - 1.0) <= 1e-14);

    const Basis u30 = make_basis(testdata::u30());
    double max_row = 0.0;
    for (Index i = 0; i < u30.rows(); ++i)
        max_row = std::max(max_row, u30.u.row(i).squaredNorm());
    CHECK(std::abs(coherence(u30) - 30.0 / 4.0 * max_row) <= 1e-14);

    for (Index n : {2, 4, 6}) {
        const Basis basis = pod_basis(testdata::dense(25, 8), n);
        const double mu = coherence(basis);
        CHECK(mu >= 1.0 - 1e-12);
        CHECK(mu <= 25.0 / static_cast<double>(n) + 1e-12);
    }
}

TEST_CASE("noiseless bound collapses for representable vectors") {
    const Basis basis = make_basis(testdata::u6());
    const Interpolant interp = build_interpolant(basis, {0, 2, 3, 5});
    const Vector f = basis.u * Vector::Ones(2);
    const NoiselessBound nb = noiseless_error_bound(interp, f);
    CHECK(nb.projection_error <= 1e-12);
    CHECK(nb.bound <= 1e-11);
}

TEST_CASE("noiseless bound is attained by vectors invisible to the samples") {
    const Basis basis = make_basis(Matrix::Identity(3, 2));
    const Interpolant interp = build_interpolant(basis, {0, 1});
    Vector f = Vector::Zero(3);
    f(2) = 1.7;
    const NoiselessBound nb = noiseless_error_bound(interp, f);
    CHECK(std::abs(nb.projection_error - 1.7) <= 1e-14);
    CHECK(std::abs(nb.bound - 1.7) <= 1e-14);
}

TEST_CASE("noiseless bound self-check holds on generic vectors") {
    const Basis basis = pod_basis(testdata::dense(30, 10), 4);
    const Interpolant interp = build_interpolant(basis, odeim_e(basis, 7));
    for (int trial = 0; trial < 5; ++trial) {
        Vector f(30);
        for (Index i = 0; i < 30; ++i)
            f(i) = std::sin(1.1 * static_cast<double>(i) + 0.3 * trial) +
                   0.2 * std::cos(2.3 * static_cast<double>(i) * (trial + 1));
        const NoiselessBound nb = noiseless_error_bound(interp, f);
        CHECK(std::abs(nb.bound - selection_norm(interp) * nb.projection_error) <=
              1e-14 * std::max(1.0, nb.bound));
    }
    CHECK_THROWS_AS(noiseless_error_bound(interp, Vector::Ones(29)), ArgumentError);
}

TEST_CASE("deim_noise_bound matches the frozen values") {
    CHECK(std::abs(deim_noise_bound(8192, 16, 1e-6, 0.0) - 0.0028934823310329716) <= 1e-15);
    CHECK(std::abs(deim_noise_bound(8192, 16, 1e-6, 1e-3) - 0.72626406508927599) <= 1e-12);
    CHECK(deim_noise_bound(8192, 16, 0.0, 0.0) == 0.0);
    CHECK(std::abs(deim_noise_bound(16, 16, 2e-3, 0.5) - 0.508) <= 1e-15);
    CHECK_THROWS_AS(deim_noise_bound(8, 0, 1e-6, 0.0), ArgumentError);
    CHECK_THROWS_AS(deim_noise_bound(8, 9, 1e-6, 0.0), ArgumentError);
    CHECK_THROWS_AS(deim_noise_bound(8, 4, -1e-6, 0.0), ArgumentError);
    CHECK_THROWS_AS(deim_noise_bound(8, 4, 1e-6, -0.1), ArgumentError);
}

TEST_CASE("make_bound_parameters computes the frozen gamma") {
    const BoundParameters p = make_bound_parameters(2000, 5, 800, 0.1, 1.3, 0.0);
    CHECK(std::abs(p.gamma - 0.31587764619085557) <= 1e-14);
    CHECK(p.big_n == 2000);
    CHECK(p.m == 800);

    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 800, 0.0, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 800, 1.0, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 800, -0.2, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 0, 800, 0.1, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(5, 6, 800, 0.1, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 0, 0.1, 1.3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 800, 0.1, 0.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_bound_parameters(2000, 5, 800, 0.1, 1.3, -1.0), ArgumentError);
}

TEST_CASE("odeim_expected_bound matches the frozen value") {
    const BoundParameters p = make_bound_parameters(2000, 5, 123, 0.1, 1.2, 1e-3);
    CHECK(std::abs(p.gamma - 0.77398096117321491) <= 1e-14);
    CHECK(std::abs(odeim_expected_bound(p, 0.05) - 0.13875291682632235) <= 1e-13);
}

TEST_CASE("odeim_expected_bound hypothesis checks") {
    // m at or below the threshold makes gamma >= 1.
    const BoundParameters vacuous = make_bound_parameters(2000, 5, 30, 0.1, 1.2, 0.0);
    CHECK(vacuous.gamma >= 1.0);
    CHECK_THROWS_AS(odeim_expected_bound(vacuous, 0.05), HypothesisError);

    BoundParameters forged;
    forged.big_n = 2000;
    forged.n = 5;
    forged.m = 10;
    forged.delta = 0.1;
    forged.mu = 1.2;
    forged.gamma = 0.5;
    forged.sigma = 0.0;
    CHECK_THROWS_AS(odeim_expected_bound(forged, 0.05), HypothesisError);

    const BoundParameters ok = make_bound_parameters(2000, 5, 200, 0.1, 1.2, 0.0);
    CHECK(odeim_expected_bound(ok, 0.0) == 0.0);
    CHECK_THROWS_AS(odeim_expected_bound(ok, -0.1), ArgumentError);
}

TEST_CASE("odeim_expected_bound noise term shrinks with the sample count") {
    double previous = std::numeric_limits<double>::infinity();
    for (Index m : {123, 246, 492}) {
        const BoundParameters p = make_bound_parameters(2000, 5, m, 0.1, 1.2, 1e-3);
        const double bound = odeim_expected_bound(p, 0.0);
        CHECK(bound < previous);
        previous = bound;
    }
}

TEST_CASE("wellposed_oversampling_fraction matches the frozen values") {
    CHECK(std::abs(wellposed_oversampling_fraction(3000, 8, 0.1, 2.0) -
                   0.7294618447233745) <= 1e-12);
    // Delta tuned so the dimensionless sampling ratio is exactly one; the
    // returned fraction then exceeds one, signalling infeasibility.
    CHECK(std::abs(wellposed_oversampling_fraction(3, 1, 0.64930493471669948, 1.0) -
                   1.8660254037844386) <= 1e-12);
}

TEST_CASE("wellposed_oversampling_fraction limits and validation") {
    for (const auto& [big_n, n] : std::vector<std::pair<Index, Index>>{
             {100, 3}, {5000, 12}, {100000, 2}})
        CHECK(wellposed_oversampling_fraction(big_n, n, 0.2, 1.5) >= 0.5);

    const double nearly_half = wellposed_oversampling_fraction(100000000, 2, 0.5, 1.0);
    CHECK(nearly_half > 0.5);
    CHECK(nearly_half < 0.51);

    CHECK_THROWS_AS(wellposed_oversampling_fraction(100, 3, 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(wellposed_oversampling_fraction(100, 3, 1.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(wellposed_oversampling_fraction(100, 0, 0.1, 1.0), ArgumentError);
    CHECK_THROWS_AS(wellposed_oversampling_fraction(2, 3, 0.1, 1.0), ArgumentError);
}
