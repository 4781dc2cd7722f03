#include "odeim/pod.hpp"

#include <cmath>
#include <string>

namespace odeim {

Basis pod_basis_from_svd(const SvdResult& svd, Index dim) {
    const Index available = svd.singular_values.size();
    if (dim < 1 || dim > available)
        throw ArgumentError("pod_basis: dimension " + std::to_string(dim) +
                            " outside [1, " + std::to_string(available) + "]");
    const Index rank = numerical_rank(svd.singular_values);
    if (dim > rank)
        throw SingularError("pod_basis: requested dimension " + std::to_string(dim) +
                            " exceeds numerical rank " + std::to_string(rank));
    Basis basis{svd.left.leftCols(dim), svd.singular_values.head(dim)};
    for (Index j = 0; j < dim; ++j) {
        Index at = 0;
        double best = -1.0;
        for (Index i = 0; i < basis.u.rows(); ++i) {
            const double mag = std::abs(basis.u(i, j));
            if (mag > best) {
                best = mag;
                at = i;
            }
        }
        if (basis.u(at, j) < 0.0) basis.u.col(j) = -basis.u.col(j);
    }
    return basis;
}

Basis pod_basis(const Matrix& snapshots, Index dim) {
    return pod_basis_from_svd(thin_svd(snapshots), dim);
}

}  // namespace odeim
