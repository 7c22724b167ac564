#pragma once

// Core vocabulary: hypothesis configurations, feature records as read from
// input, directed p-value pairs, and analysis configuration.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace repliq {

/// Input or configuration violates the data contract.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numeric routine could not deliver its accuracy contract.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Direction { Left, Right };

enum class ErrorFlavor { FDR, FWER };

/// Cross-feature dependency regime assumed for the primary study.
///  - Independent: p-values independent across features.
///  - ArbitraryMStar: arbitrary dependence, harmonic-corrected feature count.
///  - ArbitraryThreshold: arbitrary dependence, selection by a fixed
///    two-sided threshold t; uses the adjusted first-study constant.
enum class DependencyMode { Independent, ArbitraryMStar, ArbitraryThreshold };

inline std::string_view to_string(Direction d) {
    return d == Direction::Left ? "left" : "right";
}

inline std::string_view to_string(ErrorFlavor f) {
    return f == ErrorFlavor::FDR ? "fdr" : "fwer";
}

inline std::string_view to_string(DependencyMode m) {
    switch (m) {
        case DependencyMode::Independent: return "indep";
        case DependencyMode::ArbitraryMStar: return "mstar";
        case DependencyMode::ArbitraryThreshold: return "threshold";
    }
    throw std::logic_error("to_string: bad DependencyMode");
}

/// Ground-truth configuration of one feature across the two studies.
/// Each coordinate is -1 (left-sided signal), 0 (null), or 1 (right-sided
/// signal). A feature is replicated when both studies carry the same
/// non-null direction.
struct HypothesisConfig {
    int h1 = 0;
    int h2 = 0;

    [[nodiscard]] bool valid() const { return coord_ok(h1) && coord_ok(h2); }

    [[nodiscard]] bool is_replicated() const {
        return (h1 == 1 && h2 == 1) || (h1 == -1 && h2 == -1);
    }

    /// Dense index in 0..8; configurations enumerate in this order.
    [[nodiscard]] int index() const { return (h1 + 1) * 3 + (h2 + 1); }

    static HypothesisConfig from_index(int idx) {
        if (idx < 0 || idx > 8) {
            throw std::domain_error("HypothesisConfig: index out of range");
        }
        return {idx / 3 - 1, idx % 3 - 1};
    }

    [[nodiscard]] std::string key() const {
        return std::to_string(h1) + "," + std::to_string(h2);
    }

    friend bool operator==(const HypothesisConfig&, const HypothesisConfig&) = default;

  private:
    static bool coord_ok(int h) { return h == -1 || h == 0 || h == 1; }
};

/// One feature as read from input: two one-sided primary p-values and,
/// when the feature was followed up, two one-sided follow-up p-values.
struct FeatureRecord {
    std::string feature_id;
    double p1_left = 0.0;
    double p1_right = 0.0;
    std::optional<double> p2_left;
    std::optional<double> p2_right;

    [[nodiscard]] bool followed_up() const {
        return p2_left.has_value() && p2_right.has_value();
    }
};

/// A followed-up feature reduced to its favored direction: the one-sided
/// p-values of both studies in that direction.
struct DirectedPair {
    std::string feature_id;
    double p1_directed = 0.0;
    double p2_directed = 0.0;
    Direction direction = Direction::Left;
};

/// Parameters of one replicability analysis.
struct AnalysisConfig {
    std::int64_t m = 0;        ///< features examined in the primary study
    double l00 = 0.8;          ///< assumed lower fraction of double nulls
    double c2 = 0.5;           ///< share of the error budget given to study 2
    DependencyMode dependency = DependencyMode::Independent;
    std::optional<double> t;   ///< selection threshold, ArbitraryThreshold only
    ErrorFlavor flavor = ErrorFlavor::FDR;
    double level = 0.05;       ///< q (FDR) or alpha (FWER) for claims

    void validate() const {
        if (m < 1) {
            throw ValidationError("config: m must be a positive integer");
        }
        if (!(l00 >= 0.0 && l00 < 1.0)) {
            throw ValidationError("config: l00 must lie in [0, 1)");
        }
        if (!(c2 > 0.0 && c2 < 1.0)) {
            throw ValidationError("config: c2 must lie in (0, 1)");
        }
        if (!(level > 0.0 && level < 1.0)) {
            throw ValidationError("config: level must lie in (0, 1)");
        }
        if (dependency == DependencyMode::ArbitraryThreshold) {
            if (!t.has_value() || !(*t > 0.0 && *t < 1.0)) {
                throw ValidationError(
                    "config: threshold dependency mode requires t in (0, 1)");
            }
        } else if (t.has_value()) {
            throw ValidationError(
                "config: t is only meaningful with the threshold dependency mode");
        }
    }
};

namespace detail {

inline bool is_probability(double p) {
    return !std::isnan(p) && p >= 0.0 && p <= 1.0;
}

}  // namespace detail

/// Reduce a followed-up record to its favored direction. The favored
/// direction is the one with the smaller primary one-sided p-value; exact
/// ties go Left.
inline DirectedPair derive_directed_pair(const FeatureRecord& rec) {
    if (!rec.followed_up()) {
        throw ValidationError(rec.feature_id + ": follow-up p-values missing");
    }
    const double p2l = *rec.p2_left;
    const double p2r = *rec.p2_right;
    for (double p : {rec.p1_left, rec.p1_right, p2l, p2r}) {
        if (!detail::is_probability(p)) {
            throw ValidationError(rec.feature_id + ": p-value outside [0, 1]");
        }
    }
    DirectedPair out;
    out.feature_id = rec.feature_id;
    out.direction = rec.p1_left <= rec.p1_right ? Direction::Left : Direction::Right;
    if (out.direction == Direction::Left) {
        out.p1_directed = rec.p1_left;
        out.p2_directed = p2l;
    } else {
        out.p1_directed = rec.p1_right;
        out.p2_directed = p2r;
    }
    return out;
}

struct ValidatedInput {
    std::vector<FeatureRecord> records;
    std::vector<std::string> warnings;
};

/// Check a record set against a configuration. Throws ValidationError on
/// out-of-range p-values, half-present follow-up columns, duplicate ids, or
/// more records than m. One-sided pairs that do not sum to 1 (discrete or
/// inconsistent tests) are legal and produce a warning.
inline ValidatedInput validate_input(std::vector<FeatureRecord> records,
                                     const AnalysisConfig& config) {
    config.validate();
    if (records.empty()) {
        throw ValidationError("input contains no feature records");
    }
    if (static_cast<std::int64_t>(records.size()) > config.m) {
        throw ValidationError("input has " + std::to_string(records.size()) +
                              " records but m=" + std::to_string(config.m) +
                              " features were examined");
    }
    std::vector<std::string> warnings;
    std::unordered_set<std::string> seen;
    seen.reserve(records.size());
    constexpr double one_sided_sum_tol = 1e-6;
    for (const auto& rec : records) {
        if (!seen.insert(rec.feature_id).second) {
            throw ValidationError("duplicate feature_id: " + rec.feature_id);
        }
        if (!detail::is_probability(rec.p1_left) || !detail::is_probability(rec.p1_right)) {
            throw ValidationError(rec.feature_id + ": primary p-value outside [0, 1]");
        }
        if (rec.p2_left.has_value() != rec.p2_right.has_value()) {
            throw ValidationError(rec.feature_id +
                                  ": follow-up p-values must be given in both directions");
        }
        if (rec.followed_up()) {
            if (!detail::is_probability(*rec.p2_left) ||
                !detail::is_probability(*rec.p2_right)) {
                throw ValidationError(rec.feature_id +
                                      ": follow-up p-value outside [0, 1]");
            }
            if (std::abs(*rec.p2_left + *rec.p2_right - 1.0) > one_sided_sum_tol) {
                warnings.push_back(rec.feature_id +
                                   ": one-sided follow-up p-values do not sum to 1; "
                                   "treating as discrete test statistics");
            }
        }
        if (std::abs(rec.p1_left + rec.p1_right - 1.0) > one_sided_sum_tol) {
            warnings.push_back(rec.feature_id +
                               ": one-sided primary p-values do not sum to 1; "
                               "treating as discrete test statistics");
        }
    }
    return {std::move(records), std::move(warnings)};
}

}  // namespace repliq
