#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odeim/pod.hpp"

namespace odeim {

// Ordered, pairwise-distinct row indices forming the sampling matrix P.
using PointSet = std::vector<Index>;

enum class Method {
    qdeim,
    deim,
    odeim_d,
    odeim_e,
    odeim_c,
    odeim_rand,
    kdeim,
};

const char* method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

// First n pivots of the column-pivoted QR of u^T.
PointSet qdeim(const Basis& basis);

// Greedy residual selection continued past n points with cyclic column
// reuse; m = n reproduces the classical DEIM points. Argmax ties and
// already-selected indices resolve to the next-largest unselected entry,
// smaller index first.
PointSet odeim_d(const Basis& basis, Index m);

// QDEIM start, then each added point maximizes the squared inner product of
// its basis row with the last right-singular vector of the sampled basis.
PointSet odeim_e(const Basis& basis, Index m);

// QDEIM start, then points appended by descending column entropy of the
// pivot-ordered triangular coefficient matrix, deduplicated. Entropy ties
// break toward the smaller column position.
PointSet odeim_c(const Basis& basis, Index m);

// QDEIM start, then m - n indices drawn uniformly without replacement from
// the complement.
PointSet odeim_rand(const Basis& basis, Index m, std::uint64_t seed);

// k-means over the basis rows with k = n; per cluster the representative
// minimizes |row - centroid|^2 / |row|^2. Zero-norm rows score infinity and
// are only picked from singleton clusters.
PointSet kdeim(const Basis& basis, std::uint64_t seed);

// Dispatcher; methods without an oversampling rule require m = n. Stochastic
// methods consume the seed, deterministic ones ignore it.
PointSet select_points(Method method, const Basis& basis, Index m, std::uint64_t seed);

struct ClusteringResult {
    std::vector<int> assignments;          // per point, in {0, ..., k-1}
    Matrix centroids;                      // k x dim
    double objective;                      // sum of squared distances
    std::vector<double> objective_history; // one entry per Lloyd iteration
};

// Lloyd iterations with greedy farthest-point initialization (first centroid
// drawn from the seed). Empty clusters are re-seeded at the point farthest
// from its nearest centroid, which keeps the objective nonincreasing.
ClusteringResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                        int max_iters = 300, double tol = 1e-9);

struct EntropyProfile {
    Vector entropies;             // per column, pivot order; in [0, ln n]
    std::vector<Index> qr_pivots; // column j of the profile is basis row qr_pivots[j]
};

// Entropies of the 1-norm-normalized columns of R1^{-1} R from the pivoted
// QR of u^T, with the convention 0 ln 0 = 0.
EntropyProfile column_entropies(const Basis& basis);

}  // namespace odeim
