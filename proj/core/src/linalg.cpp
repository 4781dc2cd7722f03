#include "odeim/linalg.hpp"

#include <algorithm>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace odeim {

namespace {

void check_input(const Matrix& a, const char* op) {
    if (a.rows() < 1 || a.cols() < 1)
        throw ArgumentError(std::string(op) + ": empty matrix");
    if (!a.allFinite())
        throw ArgumentError(std::string(op) + ": input has non-finite entries");
}

}  // namespace

SvdResult thin_svd(const Matrix& a) {
    check_input(a, "thin_svd");
    // Jacobi is more accurate for small problems; divide and conquer scales.
    if (std::min(a.rows(), a.cols()) <= 16) {
        Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success)
            throw Error("thin_svd: Jacobi iteration did not converge within its internal sweep limit");
        return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw Error("thin_svd: implicit-shift QR iteration did not converge within its internal iteration limit");
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

PivotedQrResult pivoted_qr(const Matrix& a) {
    check_input(a, "pivoted_qr");
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    const Index k = std::min(a.rows(), a.cols());
    Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), k);
    Matrix r = qr.matrixR().topRows(k).triangularView<Eigen::Upper>();
    const auto& idx = qr.colsPermutation().indices();
    std::vector<Index> pivots(static_cast<std::size_t>(a.cols()));
    for (Index j = 0; j < a.cols(); ++j) pivots[static_cast<std::size_t>(j)] = idx(j);
    return {std::move(q), std::move(r), std::move(pivots)};
}

double min_singular_value(const Matrix& a) {
    if (a.rows() < a.cols())
        throw ArgumentError("min_singular_value: requires rows >= cols");
    SvdResult svd = thin_svd(a);
    return svd.singular_values(a.cols() - 1);
}

Vector solve_least_squares(const Matrix& a, const Vector& b) {
    check_input(a, "solve_least_squares");
    if (a.rows() < a.cols())
        throw ArgumentError("solve_least_squares: requires rows >= cols");
    if (b.size() != a.rows())
        throw ArgumentError("solve_least_squares: dimension mismatch between matrix and right-hand side");
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-13 * s(0)))
        throw SingularError("solve_least_squares: rank-deficient system, smallest singular value below 1e-13 of largest");
    return Eigen::HouseholderQR<Matrix>(a).solve(b);
}

Index numerical_rank(const Vector& singular_values) {
    if (singular_values.size() == 0) return 0;
    const double cutoff = 1e-13 * singular_values(0);
    Index rank = 0;
    for (Index i = 0; i < singular_values.size(); ++i)
        if (singular_values(i) > cutoff) ++rank;
    return rank;
}

}  // namespace odeim
