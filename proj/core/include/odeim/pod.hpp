#pragma once

#include "odeim/linalg.hpp"

namespace odeim {

struct Basis {
    Matrix u;               // N x n, orthonormal columns
    Vector singular_values; // length n, nonincreasing

    Index rows() const { return u.rows(); }
    Index dim() const { return u.cols(); }
};

// Leading `dim` left singular vectors of the snapshot matrix, no mean
// centering. Column signs are fixed so the largest-magnitude entry of each
// column is positive (first such entry on ties). Throws SingularError naming
// the numerical rank when dim exceeds it.
Basis pod_basis(const Matrix& snapshots, Index dim);

// Same truncation and sign convention applied to an existing factorization;
// lets callers reuse one SVD for several truncation levels.
Basis pod_basis_from_svd(const SvdResult& svd, Index dim);

}  // namespace odeim
