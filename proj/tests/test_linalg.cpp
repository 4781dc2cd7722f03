#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "odeim/linalg.hpp"
#include "test_data.hpp"

using namespace odeim;

TEST_CASE("thin_svd recovers frozen singular values") {
    const SvdResult svd = thin_svd(testdata::a43());
    REQUIRE(svd.singular_values.size() == 3);
    CHECK(std::abs(svd.singular_values(0) - 1.9310067879933581) <= 1e-12);
    CHECK(std::abs(svd.singular_values(1) - 1.3079955459246395) <= 1e-12);
    CHECK(svd.singular_values(2) <= 1e-14);
}

TEST_CASE("thin_svd factors reconstruct the input") {
    const std::vector<std::pair<Index, Index>> shapes = {
        {12, 7}, {7, 12}, {40, 20}, {20, 40}};
    for (const auto& [rows, cols] : shapes) {
        CAPTURE(rows);
        CAPTURE(cols);
        const Matrix a = testdata::dense(rows, cols);
        const SvdResult svd = thin_svd(a);
        const Index k = std::min(rows, cols);
        REQUIRE(svd.left.rows() == rows);
        REQUIRE(svd.left.cols() == k);
        REQUIRE(svd.right.rows() == cols);
        REQUIRE(svd.right.cols() == k);
        const Matrix rebuilt =
            svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
        CHECK((rebuilt - a).norm() <= 1e-12 * a.norm());
        CHECK((svd.left.transpose() * svd.left - Matrix::Identity(k, k)).norm() <= 1e-12);
        CHECK((svd.right.transpose() * svd.right - Matrix::Identity(k, k)).norm() <= 1e-12);
        for (Index i = 0; i + 1 < k; ++i)
            CHECK(svd.singular_values(i) >= svd.singular_values(i + 1));
        CHECK(svd.singular_values(k - 1) >= 0.0);
    }
}

TEST_CASE("thin_svd rejects empty and non-finite input") {
    CHECK_THROWS_AS(thin_svd(Matrix()), ArgumentError);
    Matrix bad = Matrix::Ones(2, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(thin_svd(bad), ArgumentError);
}

TEST_CASE("pivoted_qr orders pivots by dominant column") {
    Matrix a(2, 3);
    a << 1.0, 0.0, 10.0,
         0.0, 1.0, 0.0;
    const PivotedQrResult qr = pivoted_qr(a);
    REQUIRE(qr.pivots.size() == 3);
    CHECK(qr.pivots[0] == 2);
    CHECK(qr.pivots[1] == 1);
    CHECK(qr.pivots[2] == 0);
    CHECK(qr.q.rows() == 2);
    CHECK(qr.q.cols() == 2);
    CHECK(qr.r.rows() == 2);
    CHECK(qr.r.cols() == 3);
    CHECK(std::abs(std::abs(qr.r(0, 0)) - 10.0) <= 1e-12);
    CHECK(std::abs(std::abs(qr.r(1, 1)) - 1.0) <= 1e-12);
}

TEST_CASE("pivoted_qr reconstructs the permuted input") {
    const std::vector<std::pair<Index, Index>> shapes = {{9, 6}, {4, 7}};
    for (const auto& [rows, cols] : shapes) {
        CAPTURE(rows);
        CAPTURE(cols);
        const Matrix a = testdata::dense(rows, cols);
        const PivotedQrResult qr = pivoted_qr(a);
        const Index k = std::min(rows, cols);
        REQUIRE(static_cast<Index>(qr.pivots.size()) == cols);
        const Matrix qrprod = qr.q * qr.r;
        for (Index j = 0; j < cols; ++j)
            CHECK((qrprod.col(j) - a.col(qr.pivots[static_cast<std::size_t>(j)])).norm() <=
                  1e-12 * a.norm());
        CHECK((qr.q.transpose() * qr.q - Matrix::Identity(k, k)).norm() <= 1e-12);
        for (Index i = 0; i + 1 < k; ++i)
            CHECK(std::abs(qr.r(i, i)) >= std::abs(qr.r(i + 1, i + 1)) - 1e-14);
        for (Index i = 1; i < k; ++i)
            for (Index j = 0; j < i; ++j) CHECK(qr.r(i, j) == 0.0);
        std::vector<Index> sorted = qr.pivots;
        std::sort(sorted.begin(), sorted.end());
        for (Index j = 0; j < cols; ++j)
            CHECK(sorted[static_cast<std::size_t>(j)] == j);
    }
}

TEST_CASE("min_singular_value of simple matrices") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(std::abs(min_singular_value(d) - 1.0) <= 1e-14);

    const Matrix a = testdata::dense(11, 5);
    const SvdResult svd = thin_svd(a);
    CHECK(std::abs(min_singular_value(a) - svd.singular_values(4)) <= 1e-12);

    CHECK_THROWS_AS(min_singular_value(Matrix::Ones(2, 3)), ArgumentError);
}

TEST_CASE("solve_least_squares matches the frozen solution") {
    Matrix a(3, 2);
    a << 1.0, 2.0,
         3.0, -1.0,
         0.5, 4.0;
    Vector b(3);
    b << 1.0, -2.0, 0.7;
    const Vector x = solve_least_squares(a, b);
    REQUIRE(x.size() == 2);
    CHECK(std::abs(x(0) - -0.48751458576429407) <= 1e-12);
    CHECK(std::abs(x(1) - 0.34702450408401403) <= 1e-12);
    const Vector resid = b - a * x;
    CHECK((a.transpose() * resid).norm() <= 1e-12);
}

TEST_CASE("solve_least_squares square system is exact") {
    Matrix a(2, 2);
    a << 2.0, 1.0,
         1.0, 3.0;
    Vector b(2);
    b << 5.0, 10.0;
    const Vector x = solve_least_squares(a, b);
    CHECK((a * x - b).norm() <= 1e-12);
}

TEST_CASE("solve_least_squares input validation") {
    Matrix a(3, 2);
    a << 1.0, 2.0,
         3.0, -1.0,
         0.5, 4.0;
    const Vector b = Vector::Ones(3);
    CHECK_THROWS_AS(solve_least_squares(Matrix::Ones(2, 3), Vector::Ones(2)), ArgumentError);
    CHECK_THROWS_AS(solve_least_squares(a, Vector::Ones(4)), ArgumentError);
    CHECK_THROWS_AS(solve_least_squares(Matrix(), Vector()), ArgumentError);

    Matrix nonfinite = a;
    nonfinite(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_least_squares(nonfinite, b), ArgumentError);

    Matrix rankdef(3, 2);
    rankdef << 1.0, 2.0,
               2.0, 4.0,
               3.0, 6.0;
    CHECK_THROWS_AS(solve_least_squares(rankdef, b), SingularError);
}

TEST_CASE("numerical_rank counts values above the relative cutoff") {
    Vector s(3);
    s << 1.0, 1e-10, 1e-15;
    CHECK(numerical_rank(s) == 2);
    CHECK(numerical_rank(Vector()) == 0);
    const SvdResult svd = thin_svd(testdata::a43());
    CHECK(numerical_rank(svd.singular_values) == 2);
}
