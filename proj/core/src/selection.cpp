#include "odeim/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "odeim/rng.hpp"

namespace odeim {

namespace {

void check_oversampling_range(const Basis& basis, Index m, const char* op) {
    if (m < basis.dim() || m > basis.rows())
        throw ArgumentError(std::string(op) + ": point count " + std::to_string(m) +
                            " outside [n, N] = [" + std::to_string(basis.dim()) + ", " +
                            std::to_string(basis.rows()) + "]");
}

Index argmax_unselected(const Vector& score, const std::vector<char>& used) {
    Index pick = -1;
    double best = -1.0;
    for (Index i = 0; i < score.size(); ++i) {
        if (!used[static_cast<std::size_t>(i)] && score(i) > best) {
            best = score(i);
            pick = i;
        }
    }
    if (pick < 0) throw Error("selection: no unselected index left");
    return pick;
}

Matrix gather_rows(const Matrix& u, const PointSet& rows, Index cols) {
    Matrix out(static_cast<Index>(rows.size()), cols);
    for (std::size_t t = 0; t < rows.size(); ++t)
        out.row(static_cast<Index>(t)) = u.row(rows[t]).head(cols);
    return out;
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::qdeim: return "qdeim";
        case Method::deim: return "deim";
        case Method::odeim_d: return "odeim-d";
        case Method::odeim_e: return "odeim-e";
        case Method::odeim_c: return "odeim-c";
        case Method::odeim_rand: return "odeim-rand";
        case Method::kdeim: return "kdeim";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "qdeim") return Method::qdeim;
    if (name == "deim") return Method::deim;
    if (name == "odeim-d") return Method::odeim_d;
    if (name == "odeim-e") return Method::odeim_e;
    if (name == "odeim-c") return Method::odeim_c;
    if (name == "odeim-rand") return Method::odeim_rand;
    if (name == "kdeim") return Method::kdeim;
    return std::nullopt;
}

PointSet qdeim(const Basis& basis) {
    PivotedQrResult qr = pivoted_qr(basis.u.transpose());
    return PointSet(qr.pivots.begin(), qr.pivots.begin() + basis.dim());
}

PointSet odeim_d(const Basis& basis, Index m) {
    check_oversampling_range(basis, m, "odeim_d");
    const Matrix& u = basis.u;
    const Index n = basis.dim();
    PointSet phi;
    phi.reserve(static_cast<std::size_t>(m));
    std::vector<char> used(static_cast<std::size_t>(u.rows()), 0);
    Vector r = u.col(0);
    for (Index i = 1; i <= m; ++i) {
        const Index pick = argmax_unselected(r.cwiseAbs(), used);
        used[static_cast<std::size_t>(pick)] = 1;
        phi.push_back(pick);
        const Index d = std::min(i, n);
        const Index k = i % n;  // column feeding the next residual
        Matrix sub = gather_rows(u, phi, d);
        Vector rhs(static_cast<Index>(phi.size()));
        for (std::size_t t = 0; t < phi.size(); ++t)
            rhs(static_cast<Index>(t)) = u(phi[t], k);
        Vector c = solve_least_squares(sub, rhs);
        r = u.col(k) - u.leftCols(d) * c;
    }
    return phi;
}

PointSet odeim_e(const Basis& basis, Index m) {
    check_oversampling_range(basis, m, "odeim_e");
    const Matrix& u = basis.u;
    const Index n = basis.dim();
    PointSet phi = qdeim(basis);
    std::vector<char> used(static_cast<std::size_t>(u.rows()), 0);
    for (Index p : phi) used[static_cast<std::size_t>(p)] = 1;
    while (static_cast<Index>(phi.size()) < m) {
        SvdResult svd = thin_svd(gather_rows(u, phi, n));
        Vector w = svd.right.col(n - 1);
        Vector score = (u * w).array().square();
        const Index pick = argmax_unselected(score, used);
        used[static_cast<std::size_t>(pick)] = 1;
        phi.push_back(pick);
    }
    return phi;
}

PointSet odeim_c(const Basis& basis, Index m) {
    check_oversampling_range(basis, m, "odeim_c");
    EntropyProfile profile = column_entropies(basis);
    const Index n = basis.dim();
    const Index big_n = basis.rows();
    PointSet phi(profile.qr_pivots.begin(), profile.qr_pivots.begin() + n);
    std::vector<char> used(static_cast<std::size_t>(big_n), 0);
    for (Index p : phi) used[static_cast<std::size_t>(p)] = 1;

    std::vector<Index> order(static_cast<std::size_t>(big_n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return profile.entropies(a) > profile.entropies(b);
    });
    for (Index j : order) {
        if (static_cast<Index>(phi.size()) == m) break;
        const Index row = profile.qr_pivots[static_cast<std::size_t>(j)];
        if (used[static_cast<std::size_t>(row)]) continue;
        used[static_cast<std::size_t>(row)] = 1;
        phi.push_back(row);
    }
    return phi;
}

PointSet odeim_rand(const Basis& basis, Index m, std::uint64_t seed) {
    check_oversampling_range(basis, m, "odeim_rand");
    PointSet phi = qdeim(basis);
    std::vector<char> used(static_cast<std::size_t>(basis.rows()), 0);
    for (Index p : phi) used[static_cast<std::size_t>(p)] = 1;
    std::vector<Index> complement;
    complement.reserve(static_cast<std::size_t>(basis.rows() - basis.dim()));
    for (Index i = 0; i < basis.rows(); ++i)
        if (!used[static_cast<std::size_t>(i)]) complement.push_back(i);
    Rng rng(seed);
    const std::size_t extra = static_cast<std::size_t>(m - basis.dim());
    for (std::size_t t = 0; t < extra; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, complement.size() - 1);
        std::swap(complement[t], complement[pick(rng)]);
        phi.push_back(complement[t]);
    }
    return phi;
}

PointSet kdeim(const Basis& basis, std::uint64_t seed) {
    const Matrix& u = basis.u;
    const int k = static_cast<int>(basis.dim());
    ClusteringResult clusters = kmeans(u, k, seed);
    PointSet phi(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        Index pick = -1;
        double best = std::numeric_limits<double>::infinity();
        Index singleton = -1;
        int size = 0;
        for (Index i = 0; i < u.rows(); ++i) {
            if (clusters.assignments[static_cast<std::size_t>(i)] != c) continue;
            ++size;
            singleton = i;
            const double den = u.row(i).squaredNorm();
            if (den <= 0.0) continue;  // scores infinity
            const double num = (u.row(i) - clusters.centroids.row(c)).squaredNorm();
            const double score = num / den;
            if (score < best) {
                best = score;
                pick = i;
            }
        }
        if (pick < 0) pick = singleton;  // all-zero rows, take the last seen
        if (size == 1) pick = singleton;
        phi[static_cast<std::size_t>(c)] = pick;
    }
    return phi;
}

PointSet select_points(Method method, const Basis& basis, Index m, std::uint64_t seed) {
    const Index n = basis.dim();
    switch (method) {
        case Method::qdeim:
            if (m != n) throw ArgumentError("qdeim does not oversample; point count must equal the basis dimension");
            return qdeim(basis);
        case Method::deim:
            if (m != n) throw ArgumentError("deim does not oversample; point count must equal the basis dimension");
            return odeim_d(basis, n);
        case Method::kdeim:
            if (m != n) throw ArgumentError("kdeim does not oversample; point count must equal the basis dimension");
            return kdeim(basis, seed);
        case Method::odeim_d: return odeim_d(basis, m);
        case Method::odeim_e: return odeim_e(basis, m);
        case Method::odeim_c: return odeim_c(basis, m);
        case Method::odeim_rand: return odeim_rand(basis, m, seed);
    }
    throw ArgumentError("unknown selection method");
}

EntropyProfile column_entropies(const Basis& basis) {
    PivotedQrResult qr = pivoted_qr(basis.u.transpose());
    const Index n = basis.dim();
    const Index big_n = basis.rows();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
        const double d = std::abs(qr.r(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (!(dmin > 1e-13 * dmax))
        throw SingularError("column_entropies: leading triangular block is singular");
    Matrix coeff = qr.r.leftCols(n).triangularView<Eigen::Upper>().solve(qr.r);
    const double cap = std::log(static_cast<double>(n));
    Vector entropies(big_n);
    for (Index j = 0; j < big_n; ++j) {
        Vector p = coeff.col(j).cwiseAbs();
        const double s = p.sum();
        double e = 0.0;
        if (s > 0.0) {
            for (Index i = 0; i < n; ++i) {
                const double q = p(i) / s;
                if (q > 0.0) e -= q * std::log(q);
            }
        }
        entropies(j) = std::clamp(e, 0.0, cap);
    }
    return {std::move(entropies), std::move(qr.pivots)};
}

}  // namespace odeim
