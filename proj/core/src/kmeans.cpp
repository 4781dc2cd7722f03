#include <algorithm>
#include <cmath>
#include <limits>

#include "odeim/rng.hpp"
#include "odeim/selection.hpp"

namespace odeim {

namespace {

double recompute_objective(const Matrix& points, const Matrix& centroids,
                           const std::vector<int>& assignments) {
    double total = 0.0;
    for (Index i = 0; i < points.rows(); ++i)
        total += (points.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)])).squaredNorm();
    return total;
}

// Nearest centroid per point, ties toward the smaller cluster id.
void assign_points(const Matrix& points, const Matrix& centroids, std::vector<int>& assignments) {
    const Matrix cross = points * centroids.transpose();  // N x k
    const Vector cn = centroids.rowwise().squaredNorm();
    for (Index i = 0; i < points.rows(); ++i) {
        int pick = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < centroids.rows(); ++c) {
            const double d = cn(c) - 2.0 * cross(i, c);  // point norm omitted, constant in c
            if (d < best) {
                best = d;
                pick = static_cast<int>(c);
            }
        }
        assignments[static_cast<std::size_t>(i)] = pick;
    }
}

}  // namespace

ClusteringResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                        int max_iters, double tol) {
    const Index big_n = points.rows();
    if (k < 1 || static_cast<Index>(k) > big_n)
        throw ArgumentError("kmeans: cluster count " + std::to_string(k) +
                            " outside [1, " + std::to_string(big_n) + "]");

    Matrix centroids(k, points.cols());
    Rng rng(seed);
    std::uniform_int_distribution<Index> first(0, big_n - 1);
    centroids.row(0) = points.row(first(rng));
    Vector nearest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        Index pick = 0;
        double best = -1.0;
        for (Index i = 0; i < big_n; ++i)
            if (nearest(i) > best) {
                best = nearest(i);
                pick = i;
            }
        centroids.row(c) = points.row(pick);
        nearest = nearest.cwiseMin(
            (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> assignments(static_cast<std::size_t>(big_n), 0);
    std::vector<double> history;
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        assign_points(points, centroids, assignments);

        std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
        for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) continue;
            // Re-seed the empty centroid at the point farthest from its
            // nearest centroid, excluding points that are alone in theirs.
            Index pick = -1;
            double best = -1.0;
            for (Index i = 0; i < big_n; ++i) {
                const int owner = assignments[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(owner)] <= 1) continue;
                const double d = (points.row(i) - centroids.row(owner)).squaredNorm();
                if (d > best) {
                    best = d;
                    pick = i;
                }
            }
            if (pick < 0) throw Error("kmeans: cannot repair empty cluster");
            centroids.row(c) = points.row(pick);
            --sizes[static_cast<std::size_t>(assignments[static_cast<std::size_t>(pick)])];
            assignments[static_cast<std::size_t>(pick)] = c;
            ++sizes[static_cast<std::size_t>(c)];
        }

        centroids.setZero();
        for (Index i = 0; i < big_n; ++i)
            centroids.row(assignments[static_cast<std::size_t>(i)]) += points.row(i);
        for (int c = 0; c < k; ++c)
            centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

        const double objective = recompute_objective(points, centroids, assignments);
        history.push_back(objective);
        if (previous < std::numeric_limits<double>::infinity()) {
            const double scale = std::max(previous, 1e-300);
            if (std::abs(previous - objective) < tol * scale) break;
        }
        previous = objective;
    }

    const double objective = history.empty()
                                 ? recompute_objective(points, centroids, assignments)
                                 : history.back();
    return {std::move(assignments), std::move(centroids), objective, std::move(history)};
}

}  // namespace odeim
