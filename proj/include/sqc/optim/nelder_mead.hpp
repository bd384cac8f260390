// Derivative-free simplex minimization with dimension-adaptive coefficients
// and restart when the simplex collapses.

#pragma once

#include "sqc/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace sqc::optim {

struct NelderMeadConfig {
    std::size_t max_evaluations = 1000;
    double initial_step = 0.5;
    bool adaptive = true;           // coefficients scaled with the dimension
    double restart_tolerance = 1e-8;  // simplex value spread that counts as a stall
    double restart_step_factor = 0.5; // new simplex step relative to the previous one
};

struct OptimizeResult {
    RealVector x;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
    std::vector<double> trace;  // best value after each evaluation
};

using Objective = std::function<double(const RealVector&)>;

namespace detail {

class Counter {
public:
    Counter(const Objective& f, std::size_t budget, OptimizeResult& out)
        : f_(f), budget_(budget), out_(out) {}

    bool exhausted() const { return out_.evaluations >= budget_; }

    double operator()(const RealVector& x) {
        const double v = f_(x);
        if (!std::isfinite(v)) throw NumericalError("objective returned a non-finite value");
        ++out_.evaluations;
        if (out_.trace.empty() || v < out_.value) {
            out_.value = v;
            out_.x = x;
        }
        out_.trace.push_back(out_.value);
        return v;
    }

private:
    const Objective& f_;
    std::size_t budget_;
    OptimizeResult& out_;
};

}  // namespace detail

/// Minimizes f from x0 within the evaluation budget. A zero budget returns x0
/// unevaluated.
inline OptimizeResult minimize(const Objective& f, const RealVector& x0, const NelderMeadConfig& cfg = {}) {
    if (x0.size() == 0) throw InvalidArgument("cannot optimize over zero parameters");
    if (!(cfg.initial_step > 0.0)) throw InvalidArgument("initial step must be positive");

    OptimizeResult out;
    out.x = x0;
    detail::Counter eval(f, cfg.max_evaluations, out);
    const auto d = static_cast<std::size_t>(x0.size());
    const double dd = static_cast<double>(d);
    const double alpha = 1.0;
    const double gamma = cfg.adaptive ? 1.0 + 2.0 / dd : 2.0;
    const double rho = cfg.adaptive ? 0.75 - 0.5 / dd : 0.5;
    const double sigma = cfg.adaptive ? 1.0 - 1.0 / dd : 0.5;

    double step = cfg.initial_step;
    RealVector start = x0;
    std::vector<RealVector> pts;
    std::vector<double> vals;

    while (!eval.exhausted()) {
        // (re)build the simplex around the current best point
        pts.assign(1, start);
        vals.assign(1, eval(start));
        for (std::size_t i = 0; i < d && !eval.exhausted(); ++i) {
            RealVector p = start;
            p(static_cast<Eigen::Index>(i)) += step;
            pts.push_back(p);
            vals.push_back(eval(p));
        }
        if (pts.size() < d + 1) break;

        std::vector<std::size_t> order(d + 1);
        while (!eval.exhausted()) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
            if (vals[worst] - vals[best] <= cfg.restart_tolerance) break;

            RealVector centroid = RealVector::Zero(x0.size());
            for (std::size_t i = 0; i < d; ++i) centroid += pts[order[i]];
            centroid /= dd;

            const RealVector xr = centroid + alpha * (centroid - pts[worst]);
            const double fr = eval(xr);
            if (fr < vals[best]) {
                if (eval.exhausted()) {
                    pts[worst] = xr;
                    vals[worst] = fr;
                    break;
                }
                const RealVector xe = centroid + gamma * (xr - centroid);
                const double fe = eval(xe);
                if (fe < fr) {
                    pts[worst] = xe;
                    vals[worst] = fe;
                } else {
                    pts[worst] = xr;
                    vals[worst] = fr;
                }
                continue;
            }
            if (fr < vals[second]) {
                pts[worst] = xr;
                vals[worst] = fr;
                continue;
            }
            if (eval.exhausted()) break;
            // contraction, outside or inside
            const bool outside = fr < vals[worst];
            const RealVector xc = outside ? RealVector(centroid + rho * (xr - centroid))
                                          : RealVector(centroid + rho * (pts[worst] - centroid));
            const double fc = eval(xc);
            if (fc < (outside ? fr : vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
                continue;
            }
            // shrink toward the best vertex
            for (std::size_t i = 1; i <= d && !eval.exhausted(); ++i) {
                const std::size_t k = order[i];
                pts[k] = pts[best] + sigma * (pts[k] - pts[best]);
                vals[k] = eval(pts[k]);
            }
        }
        if (eval.exhausted()) break;
        ++out.restarts;
        start = out.x;
        step = std::max(step * cfg.restart_step_factor, 1e-6);
    }
    return out;
}

}  // namespace sqc::optim
