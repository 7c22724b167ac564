// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Every tolerance and scenario parameter is pinned here, not configurable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <repliq/repliq.hpp>

using namespace repliq;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++g_failures;
    }
}

double uniform(std::mt19937_64& rng) { return math::uniform01(rng()); }

struct Instance {
    std::vector<DirectedPair> pairs;
    EvaluationContext ctx;
};

Instance random_instance(std::mt19937_64& rng, DependencyMode mode,
                         std::int64_t max_m, std::int64_t max_r1) {
    const double l00s[] = {0.0, 0.5, 0.8};
    const double c2s[] = {0.3, 0.5, 0.7};
    const auto m = static_cast<std::int64_t>(1 + rng() % max_m);
    const auto r1 = static_cast<std::int64_t>(
        1 + rng() % std::min<std::uint64_t>(static_cast<std::uint64_t>(max_r1),
                                            static_cast<std::uint64_t>(m)));
    AnalysisConfig cfg;
    cfg.m = m;
    cfg.l00 = l00s[rng() % 3];
    cfg.c2 = c2s[rng() % 3];
    cfg.dependency = mode;
    Instance inst{{}, make_context(cfg, r1)};
    inst.pairs.reserve(static_cast<std::size_t>(r1));
    for (std::int64_t j = 0; j < r1; ++j) {
        inst.pairs.push_back({"f" + std::to_string(j), 0.5 * uniform(rng),
                              uniform(rng), Direction::Left});
    }
    return inst;
}

std::vector<std::string> sorted_ids(const ClaimSet& cs) {
    std::vector<std::string> ids;
    ids.reserve(cs.claims.size());
    for (const auto& c : cs.claims) {
        ids.push_back(c.feature_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

// 1. r-value thresholding reproduces the direct step-up procedure.
bool criterion_stepup_equivalence(std::string& detail) {
    std::mt19937_64 rng(101);
    const int instances = 1000;
    int mismatches = 0;
    for (int inst = 0; inst < instances; ++inst) {
        const DependencyMode mode = inst % 2 == 0 ? DependencyMode::Independent
                                                  : DependencyMode::ArbitraryMStar;
        const Instance in = random_instance(rng, mode, 100, 20);
        const RValueBatch batch = compute_rvalues(in.pairs, in.ctx, ErrorFlavor::FDR);
        for (int k = 1; k <= 20; ++k) {
            const double q = 0.01 * k;
            const ClaimSet via_r =
                claims_at_level(batch.rvalues, in.pairs, q, ErrorFlavor::FDR);
            const StepUpResult direct = stepup_oracle(in.pairs, q, in.ctx);
            if (sorted_ids(via_r) != sorted_ids(direct.claims)) {
                ++mismatches;
            }
        }
    }
    detail = std::to_string(instances) + " instances x 20 levels, " +
             std::to_string(mismatches) + " set mismatches";
    return mismatches == 0;
}

// 2. FWER r-values threshold exactly like the Bonferroni transform.
bool criterion_fwer_equivalence(std::string& detail) {
    std::mt19937_64 rng(102);
    const int instances = 1000;
    int mismatches = 0;
    for (int inst = 0; inst < instances; ++inst) {
        const Instance in = random_instance(rng, DependencyMode::Independent, 100, 20);
        const RValueBatch batch = compute_rvalues(in.pairs, in.ctx, ErrorFlavor::FWER);
        for (int k = 1; k <= 20; ++k) {
            const double alpha = 0.01 * k;
            for (std::size_t i = 0; i < in.pairs.size(); ++i) {
                const bool via_r = batch.rvalues[i].r <= alpha;
                const bool direct = f_bonf(alpha, i, in.pairs, in.ctx) <= alpha;
                if (via_r != direct) {
                    ++mismatches;
                }
            }
        }
    }
    detail = std::to_string(instances) + " instances x 20 levels, " +
             std::to_string(mismatches) + " claim mismatches";
    return mismatches == 0;
}

// 3. Known fixed points come out analytically.
bool criterion_fixed_points(std::string& detail) {
    AnalysisConfig cfg;
    cfg.m = 1;
    cfg.l00 = 0.0;
    cfg.c2 = 0.5;
    const EvaluationContext ctx = make_context(cfg, 1);
    const std::vector<DirectedPair> pairs{{"a", 0.01, 0.02, Direction::Left}};
    const double r_fdr = solve_fdr_rvalue(0, pairs, ctx).r;
    const double r_fwer = solve_fwer_rvalue(0, pairs, ctx).r;

    AnalysisConfig cfg2;
    cfg2.m = 1;
    cfg2.l00 = 0.8;
    cfg2.c2 = 0.5;
    const EvaluationContext ctx2 = make_context(cfg2, 1);
    const std::vector<DirectedPair> hopeless{{"b", 0.5, 0.9, Direction::Left}};
    const double r_none_fdr = solve_fdr_rvalue(0, hopeless, ctx2).r;
    const double r_none_fwer = solve_fwer_rvalue(0, hopeless, ctx2).r;

    const bool pass = std::abs(r_fdr - 0.04) <= 1e-9 &&
                      std::abs(r_fwer - 0.04) <= 1e-9 && r_none_fdr == 1.0 &&
                      r_none_fwer == 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "r_fdr=%.12g r_fwer=%.12g (want 0.04 +/- 1e-9), no-solution r=%g,%g",
                  r_fdr, r_fwer, r_none_fdr, r_none_fwer);
    detail = buf;
    return pass;
}

// 4. The threshold-adjusted constant collapses to c1 for small t and never
//    exceeds it.
bool criterion_tilde(std::string& detail) {
    std::mt19937_64 rng(104);
    int collapse_failures = 0;
    int ceiling_failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double x = 0.001 + 0.999 * uniform(rng);
        const auto m = static_cast<std::int64_t>(1 + rng() % 1000);
        const double l00 = 0.95 * uniform(rng);
        const double c2 = 0.05 + 0.9 * uniform(rng);
        const double c1v = c1(x, l00, c2);
        const double t_small =
            std::min(0.999, c1v * x / static_cast<double>(m)) * uniform(rng);
        if (t_small > 0.0) {
            const C1Tilde ct = c1_tilde(x, t_small, m, l00, c2);
            if (ct.value != c1v || !ct.exact) {
                ++collapse_failures;
            }
        }
        const double t_free = std::min(0.999, uniform(rng));
        if (t_free > 0.0) {
            const C1Tilde ct = c1_tilde(x, t_free, m, l00, c2);
            if (ct.value > c1v * (1.0 + 1e-15)) {
                ++ceiling_failures;
            }
        }
    }
    detail = "1000 draws, " + std::to_string(collapse_failures) +
             " collapse failures, " + std::to_string(ceiling_failures) +
             " ceiling violations";
    return collapse_failures == 0 && ceiling_failures == 0;
}

// 5. Bisection agrees with a dense grid scan and always converges.
bool criterion_solver_grid(std::string& detail) {
    std::mt19937_64 rng(105);
    const double step = 1e-5;
    const int grid_points = 99999;
    int features_checked = 0;
    int disagreements = 0;
    int nonconvergences = 0;
    double worst = 0.0;
    const double l00s[] = {0.0, 0.5, 0.8};
    const double c2s[] = {0.3, 0.5, 0.7};
    int inst = 0;
    while (features_checked < 10000) {
        const auto r1 = std::int64_t{20};
        const auto m = static_cast<std::int64_t>(20 + rng() % 81);
        AnalysisConfig cfg;
        cfg.m = m;
        cfg.l00 = l00s[inst % 3];
        cfg.c2 = c2s[(inst / 3) % 3];
        cfg.dependency = inst % 2 == 0 ? DependencyMode::Independent
                                       : DependencyMode::ArbitraryMStar;
        ++inst;
        const EvaluationContext ctx = make_context(cfg, r1);
        std::vector<DirectedPair> pairs;
        pairs.reserve(static_cast<std::size_t>(r1));
        for (std::int64_t j = 0; j < r1; ++j) {
            pairs.push_back({"f" + std::to_string(j), 0.5 * uniform(rng),
                             uniform(rng), Direction::Left});
        }
        std::vector<double> solved(pairs.size(), 1.0);
        try {
            const RValueBatch batch = compute_rvalues(pairs, ctx, ErrorFlavor::FDR);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                solved[i] = batch.rvalues[i].r;
            }
        } catch (const NumericalError&) {
            ++nonconvergences;
            continue;
        }
        std::vector<double> gridded(pairs.size(), 1.0);
        std::size_t remaining = pairs.size();
        for (int g = 1; g <= grid_points && remaining > 0; ++g) {
            const double x = g * step;
            const std::vector<double> f = f_values(x, pairs, ctx);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                if (gridded[i] == 1.0 && f[i] <= x) {
                    gridded[i] = x;
                    --remaining;
                }
            }
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double err = std::abs(solved[i] - gridded[i]);
            worst = std::max(worst, err);
            if (err > 1e-4) {
                ++disagreements;
            }
            ++features_checked;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d features, %d beyond 1e-4 (worst |diff|=%.3g), %d "
                  "non-convergences",
                  features_checked, disagreements, worst, nonconvergences);
    detail = buf;
    return disagreements == 0 && nonconvergences == 0;
}

ConfigCounts composite_counts() {
    ConfigCounts counts;
    counts.at(0, 0) = 425;
    counts.at(1, 1) = 15;
    counts.at(-1, -1) = 15;
    counts.at(1, 0) = 10;
    counts.at(-1, 0) = 10;
    counts.at(0, 1) = 8;
    counts.at(0, -1) = 8;
    counts.at(1, -1) = 5;
    counts.at(-1, 1) = 4;
    return counts;
}

SimScenario composite_scenario(ErrorFlavor flavor) {
    SimScenario s;
    s.counts = composite_counts();
    s.effect_size = 3.0;
    s.selection = TwoSidedThresholdRule{0.001};
    s.analysis.m = s.counts.total();
    s.analysis.l00 = 0.8;
    s.analysis.c2 = 0.5;
    s.analysis.flavor = flavor;
    s.analysis.level = 0.05;
    s.replications = 2000;
    s.seed = 20260819;
    return s;
}

// 6. Empirical directional FDR stays under q and under the analytic bound.
bool criterion_fdr_control(std::string& detail) {
    const SimScenario s = composite_scenario(ErrorFlavor::FDR);
    const SimResult result = estimate_error_rates(s);
    const double bound = theoretical_fdr_bound(s.counts, s.analysis.level,
                                               s.analysis.l00, s.analysis.c2, s.m());
    const bool pass =
        result.empirical_fdr <= s.analysis.level + 3.0 * result.mc_se_fdr &&
        result.empirical_fdr <= bound + 3.0 * result.mc_se_fdr &&
        result.control_guarantee;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "m=500 mu=3 q=0.05 reps=2000: FDR=%.5f (SE %.5f), bound=%.5f",
                  result.empirical_fdr, result.mc_se_fdr, bound);
    detail = buf;
    return pass;
}

// 7. Empirical directional FWER stays under alpha, independent and
//    equicorrelated primaries alike.
bool criterion_fwer_control(std::string& detail) {
    SimScenario indep = composite_scenario(ErrorFlavor::FWER);
    const SimResult r1 = estimate_error_rates(indep);
    SimScenario correlated = composite_scenario(ErrorFlavor::FWER);
    correlated.primary_dependence = EquicorrelatedDraws{0.3};
    correlated.seed = 20260820;
    const SimResult r2 = estimate_error_rates(correlated);
    const bool pass =
        r1.empirical_fwer <= indep.analysis.level + 3.0 * r1.mc_se_fwer &&
        r2.empirical_fwer <= correlated.analysis.level + 3.0 * r2.mc_se_fwer;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "alpha=0.05 reps=2000: FWER indep=%.5f (SE %.5f), rho=0.3: %.5f "
                  "(SE %.5f)",
                  r1.empirical_fwer, r1.mc_se_fwer, r2.empirical_fwer, r2.mc_se_fwer);
    detail = buf;
    return pass;
}

// 8. The analytic bound collapses to q at f_dot0 = l00 and never exceeds q
//    for honest l00.
bool criterion_bound_algebra(std::string& detail) {
    std::mt19937_64 rng(108);
    int collapse_failures = 0;
    int ceiling_failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double l00 = 0.95 * uniform(rng);
        const double q = 0.001 + 0.3 * uniform(rng);
        const double c2 = 0.05 + 0.9 * uniform(rng);
        if (std::abs(theoretical_fdr_bound(l00, q, l00, c2) - q) > 1e-12) {
            ++collapse_failures;
        }
        const double f_dot0 = l00 + (1.0 - l00) * uniform(rng);
        if (theoretical_fdr_bound(f_dot0, q, l00, c2) > q + 1e-12) {
            ++ceiling_failures;
        }
    }
    detail = "1000 configurations, " + std::to_string(collapse_failures) +
             " collapse failures, " + std::to_string(ceiling_failures) +
             " above q";
    return collapse_failures == 0 && ceiling_failures == 0;
}

// 9. Dominance, own-monotonicity, nestedness, permutation equivariance.
bool criterion_properties(std::string& detail) {
    std::mt19937_64 rng(109);
    int dominance = 0;
    int monotonicity = 0;
    int nestedness = 0;
    int permutation = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        const Instance in = random_instance(rng, DependencyMode::Independent, 60, 10);
        const RValueBatch fdr = compute_rvalues(in.pairs, in.ctx, ErrorFlavor::FDR);
        const RValueBatch fwer = compute_rvalues(in.pairs, in.ctx, ErrorFlavor::FWER);
        for (std::size_t i = 0; i < in.pairs.size(); ++i) {
            if (fwer.rvalues[i].r < fdr.rvalues[i].r - 1e-9) {
                ++dominance;
            }
        }
        const double l1 = uniform(rng);
        const double l2 = std::min(1.0, l1 + uniform(rng));
        const ClaimSet small = claims_at_level(fdr.rvalues, in.pairs, l1, ErrorFlavor::FDR);
        const ClaimSet large = claims_at_level(fdr.rvalues, in.pairs, l2, ErrorFlavor::FDR);
        for (const auto& c : small.claims) {
            if (!large.contains(c.feature_id)) {
                ++nestedness;
            }
        }
    }

    for (int trial = 0; trial < 1000; ++trial) {
        const DependencyMode mode = trial % 2 == 0 ? DependencyMode::Independent
                                                   : DependencyMode::ArbitraryMStar;
        Instance in = random_instance(rng, mode, 60, 10);
        const auto j = static_cast<std::size_t>(rng() % in.pairs.size());
        const double base_fdr = solve_fdr_rvalue(j, in.pairs, in.ctx).r;
        const double base_fwer = solve_fwer_rvalue(j, in.pairs, in.ctx).r;
        if (rng() % 2 == 0) {
            const double p = in.pairs[j].p1_directed;
            in.pairs[j].p1_directed = p + (0.5 - p) * uniform(rng);
        } else {
            const double p = in.pairs[j].p2_directed;
            in.pairs[j].p2_directed = p + (1.0 - p) * uniform(rng);
        }
        if (solve_fdr_rvalue(j, in.pairs, in.ctx).r < base_fdr - 1e-8) {
            ++monotonicity;
        }
        if (solve_fwer_rvalue(j, in.pairs, in.ctx).r < base_fwer - 1e-8) {
            ++monotonicity;
        }
    }

    for (int trial = 0; trial < 1000; ++trial) {
        const Instance in = random_instance(rng, DependencyMode::Independent, 60, 10);
        const RValueBatch base = compute_rvalues(in.pairs, in.ctx, ErrorFlavor::FDR);
        std::vector<std::size_t> perm(in.pairs.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<DirectedPair> shuffled;
        shuffled.reserve(perm.size());
        for (std::size_t i : perm) {
            shuffled.push_back(in.pairs[i]);
        }
        const RValueBatch moved = compute_rvalues(shuffled, in.ctx, ErrorFlavor::FDR);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (moved.rvalues[i].r != base.rvalues[perm[i]].r) {
                ++permutation;
            }
        }
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "violations: dominance=%d monotonicity=%d nestedness=%d "
                  "permutation=%d (1000 instances each)",
                  dominance, monotonicity, nestedness, permutation);
    detail = buf;
    return dominance == 0 && monotonicity == 0 && nestedness == 0 && permutation == 0;
}

// 10. A strong-signal scenario recovers most replicated features.
bool criterion_power(std::string& detail) {
    SimScenario s;
    s.counts.at(1, 1) = 20;
    s.counts.at(0, 0) = 80;
    s.effect_size = 4.0;
    s.selection = TwoSidedThresholdRule{0.005};
    s.analysis.m = 100;
    s.analysis.l00 = 0.8;
    s.analysis.c2 = 0.5;
    s.analysis.level = 0.05;
    s.replications = 500;
    s.seed = 424242;
    const SimResult result = estimate_error_rates(s);
    char buf[120];
    std::snprintf(buf, sizeof buf, "mu=4, 20 replicated features: mean power=%.4f",
                  result.mean_power);
    detail = buf;
    return result.mean_power > 0.5;
}

}  // namespace

int main() {
    std::string detail;

    detail.clear();
    report(1, "step-up oracle equivalence (FDR)", criterion_stepup_equivalence(detail),
           detail);
    detail.clear();
    report(2, "Bonferroni transform equivalence (FWER)",
           criterion_fwer_equivalence(detail), detail);
    detail.clear();
    report(3, "analytic fixed points", criterion_fixed_points(detail), detail);
    detail.clear();
    report(4, "threshold-adjusted constant", criterion_tilde(detail), detail);
    detail.clear();
    report(5, "solver agrees with dense grid", criterion_solver_grid(detail), detail);
    detail.clear();
    report(6, "directional FDR control", criterion_fdr_control(detail), detail);
    detail.clear();
    report(7, "directional FWER control", criterion_fwer_control(detail), detail);
    detail.clear();
    report(8, "analytic bound algebra", criterion_bound_algebra(detail), detail);
    detail.clear();
    report(9, "dominance and monotonicity properties", criterion_properties(detail),
           detail);
    detail.clear();
    report(10, "power sanity", criterion_power(detail), detail);

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
    } else {
        std::printf("acceptance: %d of 10 criteria FAILED\n", g_failures);
    }
    return g_failures;
}
