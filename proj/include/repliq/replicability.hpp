#pragma once

// Turning r-values into directional claims, the step-up reference procedure
// they must reproduce, and directional error accounting against a known
// truth assignment.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "rvalue.hpp"

namespace repliq {

/// One directional replicability claim.
struct Claim {
    std::string feature_id;
    Direction direction = Direction::Left;

    friend bool operator==(const Claim&, const Claim&) = default;
};

struct ClaimSet {
    double level = 0.0;
    ErrorFlavor flavor = ErrorFlavor::FDR;
    std::vector<Claim> claims;

    [[nodiscard]] bool contains(const std::string& feature_id) const {
        for (const auto& c : claims) {
            if (c.feature_id == feature_id) {
                return true;
            }
        }
        return false;
    }
};

/// Claim every feature whose r-value is at most the level, in the feature's
/// favored direction. r-values and pairs must be aligned one-to-one.
inline ClaimSet claims_at_level(std::span<const RValueResult> rvalues,
                                std::span<const DirectedPair> pairs, double level,
                                ErrorFlavor flavor) {
    if (!(level >= 0.0 && level <= 1.0)) {
        throw std::domain_error("claims_at_level: level must lie in [0, 1]");
    }
    if (rvalues.size() != pairs.size()) {
        throw ValidationError("claims_at_level: r-values and pairs are misaligned");
    }
    ClaimSet out{level, flavor, {}};
    for (std::size_t i = 0; i < rvalues.size(); ++i) {
        if (rvalues[i].flavor != flavor) {
            throw ValidationError("claims_at_level: mixed r-value flavors");
        }
        if (rvalues[i].feature_id != pairs[i].feature_id) {
            throw ValidationError("claims_at_level: r-values and pairs are misaligned");
        }
        if (rvalues[i].r <= level) {
            out.claims.push_back({pairs[i].feature_id, pairs[i].direction});
        }
    }
    return out;
}

struct StepUpResult {
    std::int64_t r2 = 0;  ///< number of replicability claims
    ClaimSet claims;
};

/// Direct step-up procedure at FDR level q: the largest r such that exactly
/// r selected features fall below both per-study thresholds scaled by r.
/// This is the reference the r-value construction must reproduce; it has no
/// fixed-threshold variant, so the threshold dependency mode is rejected.
inline StepUpResult stepup_oracle(std::span<const DirectedPair> pairs, double q,
                                  const EvaluationContext& ctx) {
    if (ctx.dependency == DependencyMode::ArbitraryThreshold) {
        throw ValidationError(
            "stepup_oracle: no step-up form exists for the threshold dependency mode");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("stepup_oracle: q must lie in (0, 1)");
    }
    if (pairs.empty() || static_cast<std::int64_t>(pairs.size()) != ctx.r1) {
        throw ValidationError("stepup_oracle: context r1 does not match the pair count");
    }
    const double base1 = c1(q, ctx.l00, ctx.c2) * q / ctx.m_effective;
    const double base2 = ctx.c2 * q / static_cast<double>(ctx.r1);
    const auto meets = [&](const DirectedPair& p, std::int64_t r) {
        const double rr = static_cast<double>(r);
        return p.p1_directed <= rr * base1 && p.p2_directed <= rr * base2;
    };
    std::int64_t r2 = 0;
    for (std::int64_t r = ctx.r1; r >= 1; --r) {
        std::int64_t count = 0;
        for (const auto& p : pairs) {
            if (meets(p, r)) {
                ++count;
            }
        }
        if (count == r) {
            r2 = r;
            break;
        }
    }
    StepUpResult out;
    out.r2 = r2;
    out.claims.level = q;
    out.claims.flavor = ErrorFlavor::FDR;
    if (r2 >= 1) {
        for (const auto& p : pairs) {
            if (meets(p, r2)) {
                out.claims.claims.push_back({p.feature_id, p.direction});
            }
        }
    }
    return out;
}

/// Directional claim counts against a truth assignment. A claim is true
/// when its direction matches a feature replicated in that direction.
struct ErrorTally {
    std::int64_t claims_made = 0;   ///< R
    std::int64_t true_claims = 0;   ///< S

    [[nodiscard]] std::int64_t false_claims() const {  // V = R - S
        return claims_made - true_claims;
    }
};

inline ErrorTally directional_error_tally(
    const ClaimSet& claims,
    const std::unordered_map<std::string, HypothesisConfig>& truth) {
    ErrorTally tally;
    for (const auto& claim : claims.claims) {
        const auto it = truth.find(claim.feature_id);
        if (it == truth.end()) {
            throw ValidationError("directional_error_tally: no truth entry for " +
                                  claim.feature_id);
        }
        ++tally.claims_made;
        const HypothesisConfig& h = it->second;
        const bool correct = claim.direction == Direction::Right
                                 ? (h.h1 == 1 && h.h2 == 1)
                                 : (h.h1 == -1 && h.h2 == -1);
        if (correct) {
            ++tally.true_claims;
        }
    }
    return tally;
}

}  // namespace repliq
