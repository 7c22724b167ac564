#pragma once

// The r-value engine: study-1 budget constants, e-values, the step-up
// transform f, and the fixed-point solvers that turn them into r-values.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "core.hpp"
#include "math.hpp"

namespace repliq {

/// Fraction of the local error budget spent on the primary study when the
/// overall level is x. Decreasing in x: a looser level leaves more of the
/// budget to study 1.
inline double c1(double x, double l00, double c2) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw std::domain_error("c1: x must lie in (0, 1]");
    }
    if (!(l00 >= 0.0 && l00 < 1.0)) {
        throw std::domain_error("c1: l00 must lie in [0, 1)");
    }
    if (!(c2 > 0.0 && c2 < 1.0)) {
        throw std::domain_error("c1: c2 must lie in (0, 1)");
    }
    return (1.0 - c2) / (1.0 - l00 * (1.0 - c2 * x));
}

/// Harmonic-corrected feature count m * H_m used under arbitrary
/// cross-feature dependence.
inline double m_star(std::int64_t m) {
    if (m < 1) {
        throw std::domain_error("m_star: m must be >= 1");
    }
    return static_cast<double>(m) * math::harmonic_number(m);
}

struct C1Tilde {
    double value = 0.0;
    /// False when no branch was exactly consistent and the closest
    /// conservative candidate was returned instead.
    bool exact = true;
};

/// Adjusted study-1 constant for selection by a fixed two-sided threshold t:
/// the largest a with a * (1 + H_{ceil(t*m/(a*x)) - 1}) = c1(x). Candidate
/// branches are a_k = c1(x) / (1 + H_k); branch k is consistent when
/// ceil(t*m/(a_k*x)) - 1 = k. Equivalently k is admissible when
/// (k + 1) / (1 + H_k) >= t*m/(c1(x)*x), and that ratio is nondecreasing in
/// k, so the smallest admissible k (largest candidate a) is found by
/// bisection over k followed by a short exact scan across the boundary.
inline C1Tilde c1_tilde(double x, double t, std::int64_t m, double l00, double c2) {
    if (!(t > 0.0 && t < 1.0)) {
        throw std::domain_error("c1_tilde: t must lie in (0, 1)");
    }
    if (m < 1) {
        throw std::domain_error("c1_tilde: m must be >= 1");
    }
    const double c1v = c1(x, l00, c2);
    const double tm_over_x = t * static_cast<double>(m) / x;
    if (tm_over_x <= c1v) {
        return {c1v, true};  // branch k = 0: threshold too small to matter
    }
    const double target = tm_over_x / c1v;
    const auto ratio = [](double k) {
        return (k + 1.0) / (1.0 + math::harmonic_number(k));
    };
    double hi = 2.0;
    while (ratio(hi) < target) {
        hi *= 2.0;
        if (hi > 1e30) {
            throw NumericalError("c1_tilde: branch search diverged");
        }
    }
    double lo = 1.0;  // ratio(1) = 1 < target here
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        (ratio(mid) >= target ? hi : lo) = mid;
    }
    double k = std::max(0.0, hi - 2.0);
    for (int guard = 0; guard < 64; ++guard, ++k) {
        const double a = c1v / (1.0 + math::harmonic_number(k));
        const double terms = tm_over_x / a;  // = t*m/(a*x)
        if (terms <= k + 1.0) {
            return {a, terms > k};
        }
    }
    throw NumericalError("c1_tilde: no admissible branch found");
}

/// Everything the per-x evaluation needs besides the directed pairs.
struct EvaluationContext {
    std::int64_t m = 0;        ///< features examined in the primary study
    double m_effective = 0.0;  ///< m, or m_star(m) under ArbitraryMStar
    std::int64_t r1 = 0;       ///< number of selected (followed-up) features
    double l00 = 0.8;
    double c2 = 0.5;
    DependencyMode dependency = DependencyMode::Independent;
    std::optional<double> t;
};

/// Build the evaluation context for a selection of size r1.
inline EvaluationContext make_context(const AnalysisConfig& config, std::int64_t r1) {
    config.validate();
    if (r1 < 1) {
        throw ValidationError("selection is empty; nothing to analyze");
    }
    if (r1 > config.m) {
        throw ValidationError("selected set is larger than m");
    }
    EvaluationContext ctx;
    ctx.m = config.m;
    ctx.m_effective = config.dependency == DependencyMode::ArbitraryMStar
                          ? m_star(config.m)
                          : static_cast<double>(config.m);
    ctx.r1 = r1;
    ctx.l00 = config.l00;
    ctx.c2 = config.c2;
    ctx.dependency = config.dependency;
    ctx.t = config.t;
    return ctx;
}

/// Counters the engine increments as it works.
struct EngineStats {
    std::int64_t tilde_fallbacks = 0;  ///< c1_tilde conservative fallbacks
};

/// Per-feature e-values at level x: the larger of the two studies'
/// budget-normalized p-values. p-values are used as given (zeros yield
/// zero e-values); the solvers substitute the smallest positive double
/// before calling in.
inline std::vector<double> e_values(double x, std::span<const DirectedPair> pairs,
                                    const EvaluationContext& ctx,
                                    EngineStats* stats = nullptr) {
    if (pairs.empty()) {
        throw ValidationError("e_values: no directed pairs");
    }
    if (static_cast<std::int64_t>(pairs.size()) != ctx.r1) {
        throw ValidationError("e_values: context r1 does not match the pair count");
    }
    double denom1;
    if (ctx.dependency == DependencyMode::ArbitraryThreshold) {
        const C1Tilde ct = c1_tilde(x, *ctx.t, ctx.m, ctx.l00, ctx.c2);
        if (!ct.exact && stats != nullptr) {
            ++stats->tilde_fallbacks;
        }
        denom1 = ct.value;
    } else {
        denom1 = c1(x, ctx.l00, ctx.c2);
    }
    const double follow_scale =
        static_cast<double>(ctx.r1) / (ctx.m_effective * ctx.c2);
    std::vector<double> e(pairs.size());
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        e[j] = std::max(pairs[j].p1_directed / denom1,
                        follow_scale * pairs[j].p2_directed);
    }
    return e;
}

/// Step-up transform of a set of e-values: with ranks assigned ascending and
/// ties getting their maximal rank, f_i = min over j with e_j >= e_i of
/// e_j * m_effective / rank_j. Monotone in i's e-value and invariant to the
/// order of the input.
inline std::vector<double> f_from_e_values(std::span<const double> e,
                                           double m_effective) {
    if (e.empty()) {
        throw ValidationError("f_from_e_values: no e-values");
    }
    const std::size_t n = e.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return e[a] < e[b]; });
    std::vector<double> f(n);
    double running = std::numeric_limits<double>::infinity();
    std::size_t k = n;
    while (k > 0) {
        const double value = e[order[k - 1]];
        std::size_t a = k - 1;
        while (a > 0 && e[order[a - 1]] == value) {
            --a;
        }
        running = std::min(running, value * m_effective / static_cast<double>(k));
        for (std::size_t i = a; i < k; ++i) {
            f[order[i]] = running;
        }
        k = a;
    }
    return f;
}

/// f-values of all selected features at level x.
inline std::vector<double> f_values(double x, std::span<const DirectedPair> pairs,
                                    const EvaluationContext& ctx,
                                    EngineStats* stats = nullptr) {
    return f_from_e_values(e_values(x, pairs, ctx, stats), ctx.m_effective);
}

/// Bonferroni transform for the FWER flavor: m times the feature's e-value,
/// always with the plain m and the unadjusted c1 regardless of the
/// configured dependency mode.
inline double f_bonf(double x, std::size_t index, std::span<const DirectedPair> pairs,
                     const EvaluationContext& ctx) {
    if (index >= pairs.size()) {
        throw ValidationError("f_bonf: feature index out of range");
    }
    const double denom1 = c1(x, ctx.l00, ctx.c2);
    const double m = static_cast<double>(ctx.m);
    const double e = std::max(pairs[index].p1_directed / denom1,
                              static_cast<double>(ctx.r1) *
                                  pairs[index].p2_directed / (m * ctx.c2));
    return m * e;
}

struct RValueResult {
    std::string feature_id;
    double r = 1.0;
    ErrorFlavor flavor = ErrorFlavor::FDR;
};

namespace detail {

constexpr double solver_edge = 1e-12;
constexpr double solver_tol = 1e-10;
constexpr int solver_max_iter = 200;

inline std::vector<DirectedPair> sanitize_pairs(std::span<const DirectedPair> pairs) {
    std::vector<DirectedPair> clean(pairs.begin(), pairs.end());
    for (auto& p : clean) {
        p.p1_directed = std::max(p.p1_directed, std::numeric_limits<double>::min());
        p.p2_directed = std::max(p.p2_directed, std::numeric_limits<double>::min());
    }
    return clean;
}

/// Root of f(x) - x = 0 for a transform with f(x)/x strictly decreasing.
/// Returns 1 when f stays above x on all of (0, 1), and the lower edge when
/// f is already below there.
template <class Fn>
double bisect_fixed_point(Fn&& f_at) {
    const double lo0 = solver_edge;
    const double hi0 = 1.0 - solver_edge;
    if (f_at(hi0) > hi0) {
        return 1.0;
    }
    if (f_at(lo0) <= lo0) {
        return lo0;
    }
    double lo = lo0;
    double hi = hi0;
    for (int iter = 0; iter < solver_max_iter && hi - lo > solver_tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (f_at(mid) > mid ? lo : hi) = mid;
    }
    if (hi - lo > solver_tol) {
        throw NumericalError("r-value bisection did not converge");
    }
    return 0.5 * (lo + hi);
}

/// Leftmost solution of f(x) <= x for the threshold dependency mode, where
/// f(x)/x need not be monotone: scan a coarse grid for the first sign
/// change, then bisect the bracket.
template <class Fn>
double min_crossing(Fn&& f_at) {
    const double lo0 = solver_edge;
    if (f_at(lo0) <= lo0) {
        return lo0;
    }
    constexpr double step = 1e-4;
    const auto refine = [&](double lo, double hi) {
        for (int iter = 0; iter < solver_max_iter && hi - lo > solver_tol; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (f_at(mid) <= mid ? hi : lo) = mid;
        }
        return hi;
    };
    double prev = lo0;
    for (int g = 1; g < 10000; ++g) {
        const double x = static_cast<double>(g) * step;
        if (f_at(x) <= x) {
            return refine(prev, x);
        }
        prev = x;
    }
    const double hi0 = 1.0 - solver_edge;
    if (f_at(hi0) <= hi0) {
        return refine(prev, hi0);
    }
    return 1.0;
}

template <class Fn>
double solve_on_unit_interval(Fn&& f_at, DependencyMode dependency) {
    const double r = dependency == DependencyMode::ArbitraryThreshold
                         ? min_crossing(f_at)
                         : bisect_fixed_point(f_at);
    return std::clamp(r, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace detail

/// FDR-flavored r-value of one selected feature: the smallest level x at
/// which the feature's f-value drops to x.
inline RValueResult solve_fdr_rvalue(std::size_t index,
                                     std::span<const DirectedPair> pairs,
                                     const EvaluationContext& ctx,
                                     EngineStats* stats = nullptr) {
    if (index >= pairs.size()) {
        throw ValidationError("solve_fdr_rvalue: feature index out of range");
    }
    const auto clean = detail::sanitize_pairs(pairs);
    const auto f_at = [&](double x) { return f_values(x, clean, ctx, stats)[index]; };
    const double r = detail::solve_on_unit_interval(f_at, ctx.dependency);
    return {pairs[index].feature_id, r, ErrorFlavor::FDR};
}

/// FWER-flavored r-value of one selected feature, from the Bonferroni
/// transform. Dependency adjustments never apply to this flavor.
inline RValueResult solve_fwer_rvalue(std::size_t index,
                                      std::span<const DirectedPair> pairs,
                                      const EvaluationContext& ctx,
                                      EngineStats* /*stats*/ = nullptr) {
    if (index >= pairs.size()) {
        throw ValidationError("solve_fwer_rvalue: feature index out of range");
    }
    DirectedPair clean = pairs[index];
    clean.p1_directed =
        std::max(clean.p1_directed, std::numeric_limits<double>::min());
    clean.p2_directed =
        std::max(clean.p2_directed, std::numeric_limits<double>::min());
    const std::span<const DirectedPair> one(&clean, 1);
    const auto f_at = [&](double x) { return f_bonf(x, 0, one, ctx); };
    const double r = detail::bisect_fixed_point(f_at);
    return {pairs[index].feature_id,
            std::clamp(r, std::numeric_limits<double>::min(), 1.0),
            ErrorFlavor::FWER};
}

struct RValueBatch {
    std::vector<RValueResult> rvalues;
    EngineStats stats;
};

/// r-values of every selected feature under one flavor.
inline RValueBatch compute_rvalues(std::span<const DirectedPair> pairs,
                                   const EvaluationContext& ctx,
                                   ErrorFlavor flavor) {
    if (pairs.empty()) {
        throw ValidationError("compute_rvalues: no directed pairs");
    }
    if (static_cast<std::int64_t>(pairs.size()) != ctx.r1) {
        throw ValidationError("compute_rvalues: context r1 does not match the pair count");
    }
    RValueBatch batch;
    batch.rvalues.reserve(pairs.size());
    const auto clean = detail::sanitize_pairs(pairs);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (flavor == ErrorFlavor::FDR) {
            const auto f_at = [&](double x) {
                return f_values(x, clean, ctx, &batch.stats)[i];
            };
            const double r = detail::solve_on_unit_interval(f_at, ctx.dependency);
            batch.rvalues.push_back({pairs[i].feature_id, r, flavor});
        } else {
            batch.rvalues.push_back(solve_fwer_rvalue(i, pairs, ctx));
        }
    }
    return batch;
}

}  // namespace repliq
