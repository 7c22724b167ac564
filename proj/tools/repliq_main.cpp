// repliq command line: analyze feature tables and run Monte Carlo
// simulations of directional error rates.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "repliq/repliq.hpp"

namespace {

void write_output(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw repliq::ValidationError("cannot open output file: " + path);
    }
    writer(out);
    out.flush();
    if (!out) {
        throw repliq::ValidationError("failed while writing: " + path);
    }
}

std::uint64_t seed_from_env(const char* text) {
    std::uint64_t value = 0;
    const std::string s(text);
    const auto [ptr, ec] =
        std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw repliq::ValidationError(
            "REPLIQ_SEED must be an unsigned integer, got '" + s + "'");
    }
    return value;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "repliq: warning: " << w << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional replicability r-values for two-study designs"};
    app.require_subcommand(1);

    std::string in_path;
    std::string out_path;
    std::string format = "csv";
    std::string dep = "indep";
    std::string flavor = "both";
    std::string select_spec = "provided";
    std::int64_t m = 0;
    double l00 = 0.8;
    double c2 = 0.5;
    double level = 0.05;
    double t_value = 0.0;

    CLI::App* analyze =
        app.add_subcommand("analyze", "compute r-values for a feature table");
    analyze->add_option("--input", in_path, "feature CSV to read")->required();
    analyze->add_option("--output", out_path, "output path (default: stdout)");
    analyze->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    analyze->add_option("--m", m, "number of features examined in the primary study")
        ->required();
    analyze->add_option("--l00", l00, "assumed lower fraction of double nulls");
    analyze->add_option("--c2", c2, "share of the error budget for the follow-up study");
    analyze->add_option("--dep", dep, "cross-feature dependency mode")
        ->check(CLI::IsMember({"indep", "mstar", "threshold"}));
    CLI::Option* t_opt = analyze->add_option(
        "--t", t_value, "two-sided selection threshold (only with --dep threshold)");
    analyze->add_option("--flavor", flavor, "which r-values to compute")
        ->check(CLI::IsMember({"fdr", "fwer", "both"}));
    analyze->add_option("--level", level, "claim level (q or alpha)");
    analyze->add_option(
        "--select", select_spec,
        "selection rule: provided | threshold:<c> | bh:<q> | bonf:<a> | topk:<k>");

    std::string scenario_path;
    std::string sim_out_path;
    std::string sim_format = "csv";
    std::uint64_t seed = 0;
    std::int64_t reps = 0;

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo estimate of directional error rates");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--output", sim_out_path, "output path (default: stdout)");
    simulate->add_option("--format", sim_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    CLI::Option* seed_opt =
        simulate->add_option("--seed", seed, "override the scenario seed");
    CLI::Option* reps_opt =
        simulate->add_option("--reps", reps, "override the scenario replication count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            repliq::AnalysisConfig cfg;
            cfg.m = m;
            cfg.l00 = l00;
            cfg.c2 = c2;
            cfg.level = level;
            cfg.dependency = repliq::parse_dependency(dep);
            if (t_opt->count() > 0) {
                cfg.t = t_value;
            }
            const repliq::FlavorRequest flavors = repliq::parse_flavor_request(flavor);
            cfg.flavor = flavors == repliq::FlavorRequest::Fwer
                             ? repliq::ErrorFlavor::FWER
                             : repliq::ErrorFlavor::FDR;
            const repliq::SelectionRule rule = repliq::parse_selection_spec(select_spec);
            repliq::AnalysisOutput result = repliq::run_analysis(
                repliq::read_feature_csv_file(in_path), cfg, rule, flavors);
            result.meta.selection_spec = repliq::to_spec_string(rule);
            print_warnings(result.meta.warnings);
            write_output(out_path, [&](std::ostream& out) {
                if (format == "json") {
                    repliq::write_analysis_json(out, result);
                } else {
                    repliq::write_analysis_csv(out, result);
                }
            });
        } else {
            repliq::SimScenario scenario = repliq::read_scenario_file(scenario_path);
            if (reps_opt->count() > 0) {
                scenario.replications = reps;
            }
            if (seed_opt->count() > 0) {
                scenario.seed = seed;
            }
            if (const char* env = std::getenv("REPLIQ_SEED")) {
                scenario.seed = seed_from_env(env);
            }
            const repliq::SimResult result = repliq::estimate_error_rates(scenario);
            print_warnings(result.warnings);
            write_output(sim_out_path, [&](std::ostream& out) {
                if (sim_format == "json") {
                    repliq::write_sim_result_json(out, scenario, result);
                } else {
                    repliq::write_sim_result_csv(out, scenario, result);
                }
            });
        }
    } catch (const std::exception& e) {
        std::cerr << "repliq: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
