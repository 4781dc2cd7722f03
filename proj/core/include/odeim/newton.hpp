#pragma once

#include <cmath>
#include <utility>

#include "odeim/linalg.hpp"

namespace odeim {

struct NewtonConfig {
    int max_iters = 50;
    double residual_tol = 1e-10;
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    int max_backtracks = 30;
};

struct NewtonResult {
    Vector x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Newton iteration with Armijo backtracking on the merit 0.5 |F|^2.
// System must provide residual(x) -> Vector and step(x, residual) -> Vector
// solving J(x) s = -F(x); step may rely on state cached by the immediately
// preceding residual(x) call. Non-finite residuals mark an iterate as
// rejected; a non-finite residual at the current point aborts.
//
// The returned iterate is the best (lowest residual norm) one seen, which is
// the meaningful answer when residual evaluations are stochastic and the
// iteration stagnates at the noise floor instead of reaching the tolerance.
template <class System>
NewtonResult newton_solve(System&& sys, Vector x, const NewtonConfig& cfg) {
    Vector best_x = x;
    double best_rn = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        Vector res = sys.residual(x);
        const double rn = res.norm();
        if (!std::isfinite(rn)) break;
        if (rn < best_rn) {
            best_rn = rn;
            best_x = x;
        }
        if (rn <= cfg.residual_tol) return {std::move(x), rn, it, true};
        Vector s = sys.step(x, res);
        if (!s.allFinite()) break;
        const double merit = 0.5 * rn * rn;
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            Vector candidate = x + t * s;
            const double rn2 = sys.residual(candidate).norm();
            if (std::isfinite(rn2) &&
                0.5 * rn2 * rn2 <= merit * (1.0 - 2.0 * cfg.armijo_c * t)) {
                x = std::move(candidate);
                accepted = true;
                break;
            }
            t *= cfg.armijo_shrink;
        }
        if (!accepted) {
            ++it;  // the stalled iteration still counts
            break;
        }
    }
    const double final_rn = sys.residual(x).norm();
    if (std::isfinite(final_rn) && final_rn < best_rn) {
        best_rn = final_rn;
        best_x = std::move(x);
    }
    if (std::isfinite(best_rn) && best_rn <= cfg.residual_tol)
        return {std::move(best_x), best_rn, it, true};
    return {std::move(best_x), best_rn, it, false};
}

}  // namespace odeim
