#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "odeim/error.hpp"
#include "odeim/experiments.hpp"

namespace odeim {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(0..count-1) on up to `jobs` threads. Work items own their seeds, so
// results are independent of the scheduling order. The first exception wins
// and is rethrown after all workers finish.
inline void parallel_for(Index count, int jobs, const std::function<void(Index)>& fn) {
    const int workers = std::min<Index>(resolve_jobs(jobs), count);
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto body = [&] {
        for (;;) {
            const Index i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline void validate_experiment_config(const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw ArgumentError("experiment: no methods given");
    if (cfg.n_grid.empty()) throw ArgumentError("experiment: empty n grid");
    for (Index n : cfg.n_grid)
        if (n < 1) throw ArgumentError("experiment: n grid entries must be positive");
    if (cfg.replicates < 1) throw ArgumentError("experiment: need at least one replicate");
    if (cfg.sigma < 0.0) throw ArgumentError("experiment: sigma must be nonnegative");
    if (cfg.rule == OversampleRule::factor && cfg.oversample_factor < 1.0)
        throw ArgumentError("experiment: oversample factor must be at least 1");
    if (cfg.rule == OversampleRule::fraction &&
        !(cfg.oversample_fraction >= 0.0 && cfg.oversample_fraction < 1.0))
        throw ArgumentError("experiment: oversample fraction must lie in [0, 1)");
}

inline bool stochastic_method(Method method) {
    return method == Method::odeim_rand || method == Method::kdeim;
}

inline bool oversamples(Method method) {
    switch (method) {
        case Method::qdeim:
        case Method::deim:
        case Method::kdeim:
            return false;
        default:
            return true;
    }
}

// Sampling-point count for one cell; fraction_base is the full dimension the
// fraction rule applies to.
inline Index cell_point_count(const ExperimentConfig& cfg, Method method, Index n,
                              Index fraction_base) {
    if (!oversamples(method)) return n;
    if (cfg.rule == OversampleRule::factor)
        return static_cast<Index>(std::llround(cfg.oversample_factor * static_cast<double>(n)));
    return n + static_cast<Index>(std::floor(cfg.oversample_fraction *
                                             static_cast<double>(fraction_base)));
}

}  // namespace odeim
