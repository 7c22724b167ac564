#pragma once

// Monte Carlo harness: synthetic two-study data under a known truth
// assignment, empirical directional error rates, and the analytic FDR
// bound they are checked against.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "core.hpp"
#include "math.hpp"
#include "replicability.hpp"
#include "rvalue.hpp"
#include "selection.hpp"

namespace repliq {

/// How many features carry each of the nine hypothesis configurations.
struct ConfigCounts {
    std::array<std::int64_t, 9> n{};

    [[nodiscard]] std::int64_t& at(int h1, int h2) {
        return n[static_cast<std::size_t>(checked_index(h1, h2))];
    }

    [[nodiscard]] std::int64_t at(int h1, int h2) const {
        return n[static_cast<std::size_t>(checked_index(h1, h2))];
    }

    [[nodiscard]] std::int64_t total() const {
        std::int64_t sum = 0;
        for (std::int64_t v : n) {
            sum += v;
        }
        return sum;
    }

    /// Fraction of features null in both studies.
    [[nodiscard]] double f00() const {
        return static_cast<double>(at(0, 0)) / static_cast<double>(total());
    }

    /// Fraction of features null in the follow-up study.
    [[nodiscard]] double f_dot0() const {
        const std::int64_t k = at(-1, 0) + at(0, 0) + at(1, 0);
        return static_cast<double>(k) / static_cast<double>(total());
    }

    /// Features replicated in either direction.
    [[nodiscard]] std::int64_t replicated_total() const {
        return at(1, 1) + at(-1, -1);
    }

    void validate() const {
        for (std::int64_t v : n) {
            if (v < 0) {
                throw ValidationError("scenario: configuration counts must be >= 0");
            }
        }
        if (total() < 1) {
            throw ValidationError("scenario: at least one feature is required");
        }
    }

  private:
    static int checked_index(int h1, int h2) {
        const HypothesisConfig h{h1, h2};
        if (!h.valid()) {
            throw std::domain_error("ConfigCounts: coordinates must be -1, 0, or 1");
        }
        return h.index();
    }
};

/// Cross-feature dependence of the test statistics within one study.
struct IndependentDraws {};

struct EquicorrelatedDraws {
    double rho = 0.0;
};

using StudyDependence = std::variant<IndependentDraws, EquicorrelatedDraws>;

inline double equicorrelation(const StudyDependence& dep) {
    if (const auto* eq = std::get_if<EquicorrelatedDraws>(&dep)) {
        if (!(eq->rho >= 0.0 && eq->rho < 1.0)) {
            throw ValidationError("scenario: rho must lie in [0, 1)");
        }
        return eq->rho;
    }
    return 0.0;
}

/// One simulation setup: a truth assignment, the data-generating mechanism,
/// and the analysis applied to every replication.
struct SimScenario {
    ConfigCounts counts;
    double effect_size = 1.0;  ///< mean shift of non-null z-scores
    StudyDependence primary_dependence{};
    StudyDependence followup_dependence{};
    SelectionRule selection = TwoSidedThresholdRule{0.05};
    AnalysisConfig analysis;
    std::int64_t replications = 1;
    std::uint64_t seed = 0;

    [[nodiscard]] std::int64_t m() const { return counts.total(); }

    void validate() const {
        counts.validate();
        analysis.validate();
        validate_rule(selection);
        if (std::holds_alternative<ProvidedRule>(selection)) {
            throw ValidationError(
                "scenario: simulation needs a data-driven selection rule");
        }
        if (analysis.m != counts.total()) {
            throw ValidationError("scenario: analysis m must equal the count total");
        }
        if (!(effect_size > 0.0) || !std::isfinite(effect_size)) {
            throw ValidationError("scenario: effect size must be a positive real");
        }
        equicorrelation(primary_dependence);
        equicorrelation(followup_dependence);
        if (replications < 1) {
            throw ValidationError("scenario: at least one replication is required");
        }
    }
};

/// Truth assignment of a scenario: configurations in index order, each
/// repeated its count. Feature j gets id "f<j+1>".
inline std::vector<HypothesisConfig> scenario_truth(const SimScenario& scenario) {
    scenario.counts.validate();
    std::vector<HypothesisConfig> truth;
    truth.reserve(static_cast<std::size_t>(scenario.m()));
    for (int idx = 0; idx < 9; ++idx) {
        const HypothesisConfig h = HypothesisConfig::from_index(idx);
        for (std::int64_t i = 0; i < scenario.counts.n[static_cast<std::size_t>(idx)];
             ++i) {
            truth.push_back(h);
        }
    }
    return truth;
}

/// Synthetic records for one replication. Deterministic in (seed,
/// replication_index): z-scores are N(mu * h, 1), equicorrelated within a
/// study through a shared factor, and one-sided p-values are the two normal
/// tails. The draw order is fixed: shared primary factor (if any), primary
/// noise for features 0..m-1, shared follow-up factor (if any), follow-up
/// noise for features 0..m-1.
inline std::vector<FeatureRecord> generate_replication(const SimScenario& scenario,
                                                       std::int64_t replication_index) {
    scenario.validate();
    if (replication_index < 0) {
        throw ValidationError("generate_replication: index must be >= 0");
    }
    const std::vector<HypothesisConfig> truth = scenario_truth(scenario);
    const std::size_t m = truth.size();
    const double mu = scenario.effect_size;
    std::mt19937_64 rng(math::stream_seed(
        scenario.seed, static_cast<std::uint64_t>(replication_index)));

    const auto draw_study = [&](const StudyDependence& dep, bool primary) {
        const double rho = equicorrelation(dep);
        double shared = 0.0;
        if (rho > 0.0) {
            shared = math::standard_normal(rng);
        }
        const double w_shared = std::sqrt(rho);
        const double w_noise = std::sqrt(1.0 - rho);
        std::vector<double> z(m);
        for (std::size_t j = 0; j < m; ++j) {
            const int h = primary ? truth[j].h1 : truth[j].h2;
            const double noise = math::standard_normal(rng);
            z[j] = mu * static_cast<double>(h) + w_shared * shared + w_noise * noise;
        }
        return z;
    };
    const std::vector<double> z1 = draw_study(scenario.primary_dependence, true);
    const std::vector<double> z2 = draw_study(scenario.followup_dependence, false);

    std::vector<FeatureRecord> records(m);
    for (std::size_t j = 0; j < m; ++j) {
        records[j].feature_id = "f" + std::to_string(j + 1);
        records[j].p1_left = math::normal_cdf(z1[j]);
        records[j].p1_right = math::normal_cdf(-z1[j]);
        records[j].p2_left = math::normal_cdf(z2[j]);
        records[j].p2_right = math::normal_cdf(-z2[j]);
    }
    return records;
}

/// Monte Carlo estimates over all replications of a scenario.
struct SimResult {
    std::int64_t replications_run = 0;
    double empirical_fdr = 0.0;   ///< mean of V / max(R, 1)
    double empirical_fwer = 0.0;  ///< fraction of replications with V > 0
    double mc_se_fdr = 0.0;
    double mc_se_fwer = 0.0;
    bool se_valid = false;  ///< false with a single replication
    double mean_power = 0.0;  ///< mean of S / (number of replicated features)
    double empty_selection_fraction = 0.0;
    /// Whether the scenario satisfies the assumption behind the error-rate
    /// guarantee: the configured l00 does not exceed the true fraction of
    /// double nulls.
    bool control_guarantee = false;
    std::vector<std::string> warnings;
};

namespace detail {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_and_se(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    const double mean = sum / n;
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

}  // namespace detail

/// Run every replication of a scenario and aggregate directional error
/// rates and power. A replication with an empty selection contributes zero
/// to every rate.
inline SimResult estimate_error_rates(const SimScenario& scenario) {
    scenario.validate();
    const std::vector<HypothesisConfig> truth = scenario_truth(scenario);
    std::unordered_map<std::string, HypothesisConfig> truth_by_id;
    truth_by_id.reserve(truth.size());
    for (std::size_t j = 0; j < truth.size(); ++j) {
        truth_by_id.emplace("f" + std::to_string(j + 1), truth[j]);
    }
    const std::int64_t replicated = scenario.counts.replicated_total();

    const auto reps = static_cast<std::size_t>(scenario.replications);
    std::vector<double> fdp(reps, 0.0);
    std::vector<double> any_false(reps, 0.0);
    std::vector<double> power(reps, 0.0);
    std::int64_t empty_count = 0;

    for (std::size_t rep = 0; rep < reps; ++rep) {
        const std::vector<FeatureRecord> records =
            generate_replication(scenario, static_cast<std::int64_t>(rep));
        const SelectionResult sel =
            select(records, scenario.selection, scenario.analysis.m);
        if (sel.empty()) {
            ++empty_count;
            continue;
        }
        std::vector<DirectedPair> pairs;
        pairs.reserve(sel.selected_indices.size());
        for (std::size_t idx : sel.selected_indices) {
            pairs.push_back(derive_directed_pair(records[idx]));
        }
        const EvaluationContext ctx = make_context(
            scenario.analysis, static_cast<std::int64_t>(pairs.size()));
        const RValueBatch batch =
            compute_rvalues(pairs, ctx, scenario.analysis.flavor);
        const ClaimSet claims = claims_at_level(
            batch.rvalues, pairs, scenario.analysis.level, scenario.analysis.flavor);
        const ErrorTally tally = directional_error_tally(claims, truth_by_id);
        if (tally.claims_made > 0) {
            fdp[rep] = static_cast<double>(tally.false_claims()) /
                       static_cast<double>(tally.claims_made);
            any_false[rep] = tally.false_claims() > 0 ? 1.0 : 0.0;
        }
        if (replicated > 0) {
            power[rep] = static_cast<double>(tally.true_claims) /
                         static_cast<double>(replicated);
        }
    }

    const detail::MeanSe fdr = detail::mean_and_se(fdp);
    const detail::MeanSe fwer = detail::mean_and_se(any_false);
    const detail::MeanSe pw = detail::mean_and_se(power);

    SimResult result;
    result.replications_run = scenario.replications;
    result.empirical_fdr = fdr.mean;
    result.empirical_fwer = fwer.mean;
    result.mc_se_fdr = fdr.se;
    result.mc_se_fwer = fwer.se;
    result.se_valid = scenario.replications > 1;
    if (!result.se_valid) {
        result.warnings.push_back(
            "single replication: Monte Carlo standard errors are undefined");
    }
    result.mean_power = pw.mean;
    result.empty_selection_fraction =
        static_cast<double>(empty_count) / static_cast<double>(reps);
    result.control_guarantee = scenario.analysis.l00 <= scenario.counts.f00();
    if (!result.control_guarantee) {
        result.warnings.push_back(
            "no control guarantee: configured l00 exceeds the true double-null "
            "fraction");
    }
    if (result.empty_selection_fraction > 0.99) {
        result.warnings.push_back(
            "selection was empty in more than 99% of replications");
    }
    return result;
}

/// Analytic upper bound on the directional FDR at level q when the
/// configured l00 is honest and follow-up p-values are independent of the
/// primary study for non-replicated features. f_dot0 is the true fraction
/// of features null in the follow-up study.
inline double theoretical_fdr_bound(double f_dot0, double q, double l00, double c2) {
    if (!(f_dot0 >= 0.0 && f_dot0 <= 1.0)) {
        throw std::domain_error("theoretical_fdr_bound: f_dot0 must lie in [0, 1]");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("theoretical_fdr_bound: q must lie in (0, 1)");
    }
    const double c1q = c1(q, l00, c2);
    return c1q * c2 * q * q * f_dot0 + c1q * q * (1.0 - f_dot0) + c2 * q;
}

inline double theoretical_fdr_bound(const ConfigCounts& counts, double q, double l00,
                                    double c2, std::int64_t m) {
    counts.validate();
    if (counts.total() != m) {
        throw ValidationError("theoretical_fdr_bound: counts do not sum to m");
    }
    return theoretical_fdr_bound(counts.f_dot0(), q, l00, c2);
}

}  // namespace repliq
