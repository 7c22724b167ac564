#pragma once

// Follow-up selection rules and the stability check that guards the
// error-control assumptions behind them.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "math.hpp"

namespace repliq {

/// Take the features that carry follow-up p-values.
struct ProvidedRule {};

/// Two-sided primary p-value strictly below a fixed cutoff.
struct TwoSidedThresholdRule {
    double cutoff = 0.05;
};

/// Benjamini-Hochberg step-up on two-sided primary p-values with family
/// size m.
struct BHRule {
    double q = 0.05;
};

/// Bonferroni: two-sided primary p-value at most alpha / m.
struct BonferroniRule {
    double alpha = 0.05;
};

/// The k smallest two-sided primary p-values, ties broken by feature id.
struct TopKRule {
    std::int64_t k = 1;
};

using SelectionRule = std::variant<ProvidedRule, TwoSidedThresholdRule, BHRule,
                                   BonferroniRule, TopKRule>;

inline void validate_rule(const SelectionRule& rule) {
    if (const auto* th = std::get_if<TwoSidedThresholdRule>(&rule)) {
        if (!(th->cutoff > 0.0 && th->cutoff < 1.0)) {
            throw ValidationError("selection: threshold cutoff must lie in (0, 1)");
        }
    } else if (const auto* bh = std::get_if<BHRule>(&rule)) {
        if (!(bh->q > 0.0 && bh->q < 1.0)) {
            throw ValidationError("selection: BH q must lie in (0, 1)");
        }
    } else if (const auto* bf = std::get_if<BonferroniRule>(&rule)) {
        if (!(bf->alpha > 0.0 && bf->alpha < 1.0)) {
            throw ValidationError("selection: Bonferroni alpha must lie in (0, 1)");
        }
    } else if (const auto* tk = std::get_if<TopKRule>(&rule)) {
        if (tk->k < 1) {
            throw ValidationError("selection: top-k needs k >= 1");
        }
    }
}

/// Two-sided primary p-value of a record: twice the smaller one-sided
/// p-value, capped at 1.
inline double two_sided_p(const FeatureRecord& rec) {
    return std::min(1.0, 2.0 * std::min(rec.p1_left, rec.p1_right));
}

struct SelectionResult {
    /// Indices into the input records, ascending.
    std::vector<std::size_t> selected_indices;
    /// Feature ids of the selected records, in the same order.
    std::vector<std::string> selected_ids;
    /// Features the rule picked but whose favored-direction primary p-value
    /// exceeds 1/2; such features carry no directional evidence and are
    /// dropped from the analysis.
    std::vector<std::string> excluded_pprime;

    [[nodiscard]] bool empty() const { return selected_indices.empty(); }
};

/// Apply a selection rule to the record set. m is the family size used by
/// the BH and Bonferroni rules (the number of features examined, not the
/// number of records present).
inline SelectionResult select(std::span<const FeatureRecord> records,
                              const SelectionRule& rule, std::int64_t m) {
    validate_rule(rule);
    if (m < 1) {
        throw ValidationError("selection: m must be a positive integer");
    }
    std::vector<std::size_t> picked;
    if (std::holds_alternative<ProvidedRule>(rule)) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].followed_up()) {
                picked.push_back(i);
            }
        }
    } else if (const auto* th = std::get_if<TwoSidedThresholdRule>(&rule)) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (two_sided_p(records[i]) < th->cutoff) {
                picked.push_back(i);
            }
        }
    } else if (const auto* bh = std::get_if<BHRule>(&rule)) {
        std::vector<std::size_t> order(records.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return two_sided_p(records[a]) < two_sided_p(records[b]);
        });
        std::size_t cut = 0;
        for (std::size_t i = order.size(); i > 0; --i) {
            const double p = two_sided_p(records[order[i - 1]]);
            if (p <= static_cast<double>(i) * bh->q / static_cast<double>(m)) {
                cut = i;
                break;
            }
        }
        picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    } else if (const auto* bf = std::get_if<BonferroniRule>(&rule)) {
        const double cutoff = bf->alpha / static_cast<double>(m);
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (two_sided_p(records[i]) <= cutoff) {
                picked.push_back(i);
            }
        }
    } else {
        const auto& tk = std::get<TopKRule>(rule);
        if (tk.k > static_cast<std::int64_t>(records.size())) {
            throw ValidationError("selection: top-k asks for " + std::to_string(tk.k) +
                                  " features but only " +
                                  std::to_string(records.size()) + " records exist");
        }
        std::vector<std::size_t> order(records.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double pa = two_sided_p(records[a]);
            const double pb = two_sided_p(records[b]);
            if (pa != pb) {
                return pa < pb;
            }
            return records[a].feature_id < records[b].feature_id;
        });
        picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tk.k));
    }

    SelectionResult result;
    std::sort(picked.begin(), picked.end());
    for (std::size_t i : picked) {
        if (std::min(records[i].p1_left, records[i].p1_right) > 0.5) {
            result.excluded_pprime.push_back(records[i].feature_id);
        } else {
            result.selected_indices.push_back(i);
            result.selected_ids.push_back(records[i].feature_id);
        }
    }
    return result;
}

struct StabilityReport {
    std::int64_t trials = 0;          ///< perturbations attempted
    std::int64_t kept = 0;            ///< perturbations keeping the feature selected
    std::int64_t violations = 0;      ///< kept perturbations that changed the set
    std::vector<std::string> violating_ids;

    [[nodiscard]] bool stable() const { return violations == 0; }
};

/// Empirical probe of the stability property a selection rule must have:
/// perturbing the primary p-values of a selected feature, in ways that keep
/// it selected, must not change the selected set. Each trial redraws one
/// selected feature's primary pair as (u, 1-u) and re-runs selection.
inline StabilityReport stability_check(std::span<const FeatureRecord> records,
                                       const SelectionRule& rule, std::int64_t m,
                                       std::int64_t trials_per_feature,
                                       std::uint64_t seed = 2026) {
    if (trials_per_feature < 1) {
        throw ValidationError("stability_check: need at least one trial per feature");
    }
    const SelectionResult base = select(records, rule, m);
    std::vector<FeatureRecord> work(records.begin(), records.end());
    std::mt19937_64 rng(math::splitmix64(seed));
    StabilityReport report;
    for (std::size_t idx : base.selected_indices) {
        const FeatureRecord original = work[idx];
        bool flagged = false;
        for (std::int64_t trial = 0; trial < trials_per_feature; ++trial) {
            const double u = math::uniform01(rng());
            work[idx].p1_left = u;
            work[idx].p1_right = 1.0 - u;
            const SelectionResult perturbed = select(work, rule, m);
            ++report.trials;
            const bool still_in =
                std::binary_search(perturbed.selected_indices.begin(),
                                   perturbed.selected_indices.end(), idx);
            if (still_in) {
                ++report.kept;
                if (perturbed.selected_indices != base.selected_indices) {
                    ++report.violations;
                    if (!flagged) {
                        report.violating_ids.push_back(original.feature_id);
                        flagged = true;
                    }
                }
            }
        }
        work[idx] = original;
    }
    return report;
}

}  // namespace repliq
