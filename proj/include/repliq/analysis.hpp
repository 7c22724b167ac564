#pragma once

// End-to-end analysis pipeline: validate records, select, derive directed
// pairs, compute r-values in the requested flavors, and mark claims.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "replicability.hpp"
#include "rvalue.hpp"
#include "selection.hpp"

namespace repliq {

enum class FlavorRequest { Fdr, Fwer, Both };

/// One selected feature in the analysis output.
struct AnalysisRow {
    std::string feature_id;
    Direction direction = Direction::Left;
    double p1_directed = 0.0;
    double p2_directed = 0.0;
    std::optional<double> r_fdr;
    std::optional<double> r_fwer;
    bool claimed_fdr = false;
    bool claimed_fwer = false;
};

struct AnalysisMetadata {
    AnalysisConfig config;
    FlavorRequest flavors = FlavorRequest::Both;
    std::string selection_spec;  ///< filled by callers that parsed a rule spec
    std::int64_t records_in = 0;
    std::int64_t selected = 0;
    std::vector<std::string> excluded_pprime;
    std::vector<std::string> warnings;
    bool tilde_fallback = false;
};

struct AnalysisOutput {
    AnalysisMetadata meta;
    std::vector<AnalysisRow> rows;

    /// Rebuild the claim set of one flavor from the rows.
    [[nodiscard]] ClaimSet claim_set(ErrorFlavor flavor) const {
        ClaimSet cs{meta.config.level, flavor, {}};
        for (const auto& row : rows) {
            const bool claimed =
                flavor == ErrorFlavor::FDR ? row.claimed_fdr : row.claimed_fwer;
            if (claimed) {
                cs.claims.push_back({row.feature_id, row.direction});
            }
        }
        return cs;
    }
};

inline AnalysisOutput run_analysis(std::vector<FeatureRecord> records,
                                   const AnalysisConfig& config,
                                   const SelectionRule& rule, FlavorRequest flavors) {
    ValidatedInput input = validate_input(std::move(records), config);
    const SelectionResult sel = select(input.records, rule, config.m);
    if (sel.empty()) {
        throw ValidationError("selection is empty; no features to analyze");
    }
    std::vector<DirectedPair> pairs;
    pairs.reserve(sel.selected_indices.size());
    for (std::size_t idx : sel.selected_indices) {
        pairs.push_back(derive_directed_pair(input.records[idx]));
    }
    const auto r1 = static_cast<std::int64_t>(pairs.size());
    const EvaluationContext ctx = make_context(config, r1);

    AnalysisOutput out;
    out.meta.config = config;
    out.meta.flavors = flavors;
    out.meta.records_in = static_cast<std::int64_t>(input.records.size());
    out.meta.selected = r1;
    out.meta.excluded_pprime = sel.excluded_pprime;
    out.meta.warnings = std::move(input.warnings);

    out.rows.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out.rows[i].feature_id = pairs[i].feature_id;
        out.rows[i].direction = pairs[i].direction;
        out.rows[i].p1_directed = pairs[i].p1_directed;
        out.rows[i].p2_directed = pairs[i].p2_directed;
    }

    if (flavors == FlavorRequest::Fdr || flavors == FlavorRequest::Both) {
        const RValueBatch batch = compute_rvalues(pairs, ctx, ErrorFlavor::FDR);
        out.meta.tilde_fallback = batch.stats.tilde_fallbacks > 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            out.rows[i].r_fdr = batch.rvalues[i].r;
            out.rows[i].claimed_fdr = batch.rvalues[i].r <= config.level;
        }
    }
    if (flavors == FlavorRequest::Fwer || flavors == FlavorRequest::Both) {
        const RValueBatch batch = compute_rvalues(pairs, ctx, ErrorFlavor::FWER);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            out.rows[i].r_fwer = batch.rvalues[i].r;
            out.rows[i].claimed_fwer = batch.rvalues[i].r <= config.level;
        }
    }
    return out;
}

}  // namespace repliq
