#include "odeim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "odeim/error.hpp"

namespace odeim {

double averaged_relative_l2(const std::vector<Vector>& truth,
                            const std::vector<Vector>& approx) {
    if (truth.size() != approx.size())
        throw ArgumentError("averaged relative l2: truth and approximation counts differ");
    if (truth.empty()) throw ArgumentError("averaged relative l2: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (truth[i].size() != approx[i].size())
            throw ArgumentError("averaged relative l2: length mismatch at index " +
                                std::to_string(i));
        const double tn = truth[i].norm();
        if (tn == 0.0)
            throw ArgumentError("averaged relative l2: zero-norm truth vector at index " +
                                std::to_string(i));
        acc += (truth[i] - approx[i]).norm() / tn;
    }
    return acc / static_cast<double>(truth.size());
}

Vector add_noise(const Vector& v, double sigma, Rng& rng) {
    if (sigma < 0.0) throw ArgumentError("add_noise: sigma must be nonnegative");
    if (sigma == 0.0) return v;
    Vector out = v;
    std::normal_distribution<double> g(0.0, sigma);
    for (Index i = 0; i < out.size(); ++i) out(i) += g(rng);
    return out;
}

std::vector<CellAggregate> ErrorTable::aggregates() const {
    std::vector<CellAggregate> out;
    for (const CellResult& cell : cells) {
        CellAggregate* agg = nullptr;
        for (CellAggregate& a : out) {
            if (a.method == cell.method && a.n == cell.n) {
                agg = &a;
                break;
            }
        }
        if (!agg) {
            out.emplace_back();
            agg = &out.back();
            agg->method = cell.method;
            agg->n = cell.n;
            agg->m = cell.m;
        }
        if (!cell.ok()) {
            ++agg->failed_count;
            continue;
        }
        if (agg->ok_count == 0) {
            agg->mean_error = cell.error;
            agg->min_error = cell.error;
            agg->max_error = cell.error;
            agg->mean_selection_norm = cell.selection_norm;
        } else {
            agg->mean_error += cell.error;
            agg->min_error = std::min(agg->min_error, cell.error);
            agg->max_error = std::max(agg->max_error, cell.error);
            agg->mean_selection_norm += cell.selection_norm;
        }
        ++agg->ok_count;
    }
    for (CellAggregate& a : out) {
        if (a.ok_count > 0) {
            a.mean_error /= a.ok_count;
            a.mean_selection_norm /= a.ok_count;
        }
    }
    return out;
}

double ErrorTable::mean_error(Method method, Index n) const {
    for (const CellAggregate& a : aggregates()) {
        if (a.method == method && a.n == n) return a.mean_error;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double growth_rate(const ErrorTable& table, Method method, Index n_min, Index n_max) {
    if (n_min > n_max) throw ArgumentError("growth rate: empty n range");
    std::vector<double> ln_n;
    std::vector<double> ln_e;
    for (const CellAggregate& a : table.aggregates()) {
        if (a.method != method || a.n < n_min || a.n > n_max) continue;
        if (a.ok_count == 0 || !(a.mean_error > 0.0) || !std::isfinite(a.mean_error))
            continue;
        ln_n.push_back(std::log(static_cast<double>(a.n)));
        ln_e.push_back(std::log(a.mean_error));
    }
    if (ln_n.size() < 4)
        throw ArgumentError("growth rate: need at least 4 usable grid points in range");
    const double k = static_cast<double>(ln_n.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < ln_n.size(); ++i) {
        mx += ln_n[i];
        my += ln_e[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < ln_n.size(); ++i) {
        sxx += (ln_n[i] - mx) * (ln_n[i] - mx);
        sxy += (ln_n[i] - mx) * (ln_e[i] - my);
    }
    if (sxx == 0.0) throw ArgumentError("growth rate: degenerate n range");
    return sxy / sxx;
}

std::vector<Index> sample_with_replacement(Index big_n, Index m, Rng& rng) {
    if (big_n < 1) throw ArgumentError("sample with replacement: empty index set");
    if (m < 1) throw ArgumentError("sample with replacement: need at least one draw");
    std::uniform_int_distribution<Index> pick(0, big_n - 1);
    std::vector<Index> out(static_cast<size_t>(m));
    for (Index i = 0; i < m; ++i) out[static_cast<size_t>(i)] = pick(rng);
    return out;
}

}  // namespace odeim
