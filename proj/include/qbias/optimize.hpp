#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qbias/rng.hpp"

namespace qbias {

using Objective = std::function<double(std::span<const double>)>;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;  // affects only the distinctness metric for top-k
};

struct OptimizerConfig {
    int restarts = 50;
    int max_iterations = 2000;
    double f_tolerance = 1e-9;
    double x_tolerance = 1e-8;
    int top_k = 3;
    std::uint64_t seed = 0;
    int grid_resolution = 9;
};

inline void validate(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iterations < 1 || cfg.top_k < 1 || cfg.grid_resolution < 1)
        throw std::invalid_argument("OptimizerConfig: counts must be >= 1");
    if (!(cfg.f_tolerance > 0.0) || !(cfg.x_tolerance > 0.0))
        throw std::invalid_argument("OptimizerConfig: tolerances must be positive");
}

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Standard Nelder-Mead (reflect 1, expand 2, contract 0.5, shrink 0.5),
// unconstrained: objectives here are trigonometric parametrizations that stay
// valid outside their nominal boxes. Converged when the simplex value spread
// falls below f_tol or its diameter below x_tol.
inline NelderMeadResult nelder_mead_minimize(const Objective& f, std::span<const double> start,
                                             std::span<const double> step, int max_iterations,
                                             double f_tol, double x_tol) {
    const std::size_t n = start.size();
    if (n == 0 || step.size() != n)
        throw std::invalid_argument("nelder_mead_minimize: bad start/step sizes");

    std::vector<std::vector<double>> xs(n + 1, std::vector<double>(start.begin(), start.end()));
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step[i];
    std::vector<double> fs(n + 1);
    int evals = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = f(xs[i]);
        ++evals;
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xx(n);
    bool converged = false;

    for (int iter = 0; iter < max_iterations; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });

        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t d = 0; d < n; ++d)
                diameter = std::max(diameter, std::abs(xs[order[i]][d] - xs[best][d]));
        if (fs[worst] - fs[best] <= f_tol || diameter <= x_tol) {
            converged = true;
            break;
        }

        for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += xs[order[i]][d];
            centroid[d] = s / static_cast<double>(n);
        }

        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - xs[worst][d]);
        const double fr = f(xr);
        ++evals;

        if (fr < fs[best]) {
            for (std::size_t d = 0; d < n; ++d) xx[d] = centroid[d] + 2.0 * (xr[d] - centroid[d]);
            const double fe = f(xx);
            ++evals;
            if (fe < fr) {
                xs[worst] = xx;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            if (outside) {
                for (std::size_t d = 0; d < n; ++d)
                    xx[d] = centroid[d] + 0.5 * (xr[d] - centroid[d]);
            } else {
                for (std::size_t d = 0; d < n; ++d)
                    xx[d] = centroid[d] - 0.5 * (centroid[d] - xs[worst][d]);
            }
            const double fc = f(xx);
            ++evals;
            if ((outside && fc <= fr) || (!outside && fc < fs[worst])) {
                xs[worst] = xx;
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
                    fs[i] = f(xs[i]);
                    ++evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    return {xs[best], fs[best], evals, converged};
}

struct LocalOptimum {
    std::vector<double> params;
    double value = 0.0;
    int restart_index = 0;
    bool converged = false;
};

struct MultiStartResult {
    double best_value = 0.0;
    std::vector<LocalOptimum> optima;  // distinct, best first, at most top_k
    int restarts_used = 0;
    int failed_restarts = 0;
};

namespace detail {

inline double param_distance(const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<Interval>& bounds) {
    double best = 0.0;
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        double delta = std::abs(a[d] - b[d]);
        if (bounds[d].periodic) {
            const double period = bounds[d].hi - bounds[d].lo;
            delta = std::fmod(delta, period);
            delta = std::min(delta, period - delta);
        }
        best = std::max(best, delta);
    }
    return best;
}

} // namespace detail

// Seeded multi-start maximization: optional fixed informed starts, then
// cfg.restarts independent Nelder-Mead runs from uniform random starts inside
// bounds, followed by up to three polish rounds around the incumbent.
// Informed starts run first so they win exact ties; the random restart r
// keeps its substream mix_seed(cfg.seed, r) regardless of how many informed
// starts precede it. Deterministic given cfg.seed.
inline MultiStartResult multi_start_maximize(const Objective& f,
                                             const std::vector<Interval>& bounds,
                                             const OptimizerConfig& cfg,
                                             const std::vector<std::vector<double>>& informed = {}) {
    validate(cfg);
    const std::size_t n = bounds.size();
    if (n == 0 || n > 10)
        throw std::invalid_argument("multi_start_maximize: need 1..10 parameters");
    for (const std::vector<double>& s : informed)
        if (s.size() != n)
            throw std::invalid_argument("multi_start_maximize: informed start arity mismatch");

    const Objective neg = [&f](std::span<const double> x) { return -f(x); };
    const int informed_count = static_cast<int>(informed.size());

    std::vector<double> start(n), step(n);
    for (std::size_t d = 0; d < n; ++d) step[d] = 0.1 * (bounds[d].hi - bounds[d].lo);
    std::vector<LocalOptimum> all;
    all.reserve(static_cast<std::size_t>(informed_count + cfg.restarts));
    int failed = 0;
    for (int r = 0; r < informed_count; ++r) {
        NelderMeadResult res = nelder_mead_minimize(neg, informed[static_cast<std::size_t>(r)],
                                                    step, cfg.max_iterations, cfg.f_tolerance,
                                                    cfg.x_tolerance);
        if (!res.converged) ++failed;
        all.push_back({std::move(res.x), -res.value, r, res.converged});
    }
    for (int r = 0; r < cfg.restarts; ++r) {
        RandomStream rs(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        for (std::size_t d = 0; d < n; ++d) start[d] = rs.uniform(bounds[d].lo, bounds[d].hi);
        NelderMeadResult res = nelder_mead_minimize(neg, start, step, cfg.max_iterations,
                                                    cfg.f_tolerance, cfg.x_tolerance);
        if (!res.converged) ++failed;
        all.push_back({std::move(res.x), -res.value, informed_count + r, res.converged});
    }

    std::stable_sort(all.begin(), all.end(), [](const LocalOptimum& a, const LocalOptimum& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.restart_index < b.restart_index;
    });

    // Polish the incumbent with a fresh, tighter simplex; repeats while it
    // keeps improving, capped at three rounds.
    for (int round = 0; round < 3; ++round) {
        for (std::size_t d = 0; d < n; ++d) step[d] = 0.02 * (bounds[d].hi - bounds[d].lo);
        NelderMeadResult res = nelder_mead_minimize(neg, all[0].params, step, cfg.max_iterations,
                                                    cfg.f_tolerance, cfg.x_tolerance);
        if (-res.value <= all[0].value) break;
        all[0].params = std::move(res.x);
        all[0].value = -res.value;
    }

    MultiStartResult out;
    out.best_value = all[0].value;
    out.restarts_used = informed_count + cfg.restarts;
    out.failed_restarts = failed;
    for (LocalOptimum& opt : all) {
        bool distinct = true;
        for (const LocalOptimum& kept : out.optima)
            if (detail::param_distance(opt.params, kept.params, bounds) <= 1e-3) {
                distinct = false;
                break;
            }
        if (!distinct) continue;
        out.optima.push_back(std::move(opt));
        if (static_cast<int>(out.optima.size()) == cfg.top_k) break;
    }
    return out;
}

struct GridResult {
    std::vector<double> x;
    double value = 0.0;
};

// Brute-force maximum over a uniform grid including the endpoints. Oracle for
// optimizer soundness tests, never part of the production path.
inline GridResult grid_oracle(const Objective& f, const std::vector<Interval>& bounds,
                              int resolution) {
    const std::size_t n = bounds.size();
    if (n == 0) throw std::invalid_argument("grid_oracle: need at least one parameter");
    if (resolution < 2) throw std::invalid_argument("grid_oracle: resolution must be >= 2");
    if (std::pow(static_cast<double>(resolution), static_cast<double>(n)) > 1e8)
        throw std::invalid_argument("grid_oracle: grid larger than the 1e8 evaluation guard");

    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    GridResult best;
    best.value = -std::numeric_limits<double>::infinity();
    while (true) {
        for (std::size_t d = 0; d < n; ++d)
            x[d] = bounds[d].lo +
                   (bounds[d].hi - bounds[d].lo) * idx[d] / static_cast<double>(resolution - 1);
        const double v = f(x);
        if (v > best.value) {
            best.value = v;
            best.x = x;
        }
        std::size_t d = 0;
        while (d < n && ++idx[d] == resolution) {
            idx[d] = 0;
            ++d;
        }
        if (d == n) break;
    }
    return best;
}

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section minimization on [lo, hi]; assumes unimodality, returns the
// best point actually evaluated.
inline ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                             double hi, double x_tol = 1e-9,
                                             int max_iterations = 200) {
    if (!(hi >= lo)) throw std::invalid_argument("golden_section_minimize: bad interval");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    ScalarOptimum best = f1 <= f2 ? ScalarOptimum{x1, f1} : ScalarOptimum{x2, f2};
    for (int i = 0; i < max_iterations && (b - a) > x_tol; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        const ScalarOptimum cand = f1 <= f2 ? ScalarOptimum{x1, f1} : ScalarOptimum{x2, f2};
        if (cand.value < best.value) best = cand;
    }
    return best;
}

} // namespace qbias
