#pragma once

#include <vector>

#include <Eigen/Core>

#include "odeim/error.hpp"

namespace odeim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SvdResult {
    Matrix left;             // orthonormal columns
    Vector singular_values;  // nonincreasing, nonnegative
    Matrix right;            // orthonormal columns
};

struct PivotedQrResult {
    Matrix q;                   // rows x k, orthonormal columns, k = min(rows, cols)
    Matrix r;                   // k x cols, upper trapezoidal, |diag| nonincreasing
    std::vector<Index> pivots;  // pivots[j] = input column factored at position j
};

SvdResult thin_svd(const Matrix& a);
PivotedQrResult pivoted_qr(const Matrix& a);

// Smallest singular value of a tall matrix (rows >= cols).
double min_singular_value(const Matrix& a);

// Minimum-norm residual solve of a x = b for full-column-rank a via QR.
// Throws SingularError when the smallest singular value of a falls below
// 1e-13 of the largest.
Vector solve_least_squares(const Matrix& a, const Vector& b);

// Number of singular values above 1e-13 of the largest.
Index numerical_rank(const Vector& singular_values);

}  // namespace odeim
