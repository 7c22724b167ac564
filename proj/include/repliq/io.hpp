#pragma once

// Text formats: feature CSV input, analysis output (CSV and JSON),
// simulation scenario files, and simulation result tables. All floating
// point output is rendered with 10 significant digits so repeated runs are
// byte-identical.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"
#include "core.hpp"
#include "selection.hpp"
#include "simulation.hpp"

namespace repliq {

inline std::string format_double(double v, int significant = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

namespace detail {

inline std::string trim_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

inline std::vector<std::string> split_line(std::string_view line, char sep = ',') {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return fields;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline double parse_double(std::string_view text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError(what + ": cannot parse number '" + std::string(text) +
                              "'");
    }
    return value;
}

inline std::int64_t parse_int64(std::string_view text, const std::string& what) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError(what + ": cannot parse integer '" + std::string(text) +
                              "'");
    }
    return value;
}

inline void check_plain_field(const std::string& value, const std::string& what) {
    if (value.find_first_of(",\r\n") != std::string::npos) {
        throw ValidationError(what + " contains a comma or newline: " + value);
    }
}

}  // namespace detail

inline Direction parse_direction(std::string_view s) {
    if (s == "left") {
        return Direction::Left;
    }
    if (s == "right") {
        return Direction::Right;
    }
    throw ValidationError("unknown direction: " + std::string(s));
}

inline ErrorFlavor parse_flavor(std::string_view s) {
    if (s == "fdr") {
        return ErrorFlavor::FDR;
    }
    if (s == "fwer") {
        return ErrorFlavor::FWER;
    }
    throw ValidationError("unknown error flavor: " + std::string(s));
}

inline FlavorRequest parse_flavor_request(std::string_view s) {
    if (s == "fdr") {
        return FlavorRequest::Fdr;
    }
    if (s == "fwer") {
        return FlavorRequest::Fwer;
    }
    if (s == "both") {
        return FlavorRequest::Both;
    }
    throw ValidationError("unknown flavor request: " + std::string(s));
}

inline std::string_view to_string(FlavorRequest f) {
    switch (f) {
        case FlavorRequest::Fdr: return "fdr";
        case FlavorRequest::Fwer: return "fwer";
        case FlavorRequest::Both: return "both";
    }
    throw std::logic_error("to_string: bad FlavorRequest");
}

inline DependencyMode parse_dependency(std::string_view s) {
    if (s == "indep") {
        return DependencyMode::Independent;
    }
    if (s == "mstar") {
        return DependencyMode::ArbitraryMStar;
    }
    if (s == "threshold") {
        return DependencyMode::ArbitraryThreshold;
    }
    throw ValidationError("unknown dependency mode: " + std::string(s));
}

/// Selection rule mini-language used on the command line and in scenario
/// files: provided | threshold:<c> | bh:<q> | bonf:<a> | topk:<k>.
inline SelectionRule parse_selection_spec(const std::string& spec) {
    if (spec == "provided") {
        return ProvidedRule{};
    }
    const std::size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        const std::string tail = spec.substr(colon + 1);
        if (head == "threshold") {
            return TwoSidedThresholdRule{detail::parse_double(tail, "selection spec")};
        }
        if (head == "bh") {
            return BHRule{detail::parse_double(tail, "selection spec")};
        }
        if (head == "bonf") {
            return BonferroniRule{detail::parse_double(tail, "selection spec")};
        }
        if (head == "topk") {
            return TopKRule{detail::parse_int64(tail, "selection spec")};
        }
    }
    throw ValidationError("unknown selection rule: " + spec);
}

inline std::string to_spec_string(const SelectionRule& rule) {
    if (std::holds_alternative<ProvidedRule>(rule)) {
        return "provided";
    }
    if (const auto* th = std::get_if<TwoSidedThresholdRule>(&rule)) {
        return "threshold:" + format_double(th->cutoff);
    }
    if (const auto* bh = std::get_if<BHRule>(&rule)) {
        return "bh:" + format_double(bh->q);
    }
    if (const auto* bf = std::get_if<BonferroniRule>(&rule)) {
        return "bonf:" + format_double(bf->alpha);
    }
    return "topk:" + std::to_string(std::get<TopKRule>(rule).k);
}

inline std::string dependence_spec(const StudyDependence& dep) {
    if (const auto* eq = std::get_if<EquicorrelatedDraws>(&dep)) {
        return "equicorrelated:" + format_double(eq->rho);
    }
    return "indep";
}

// ---------------------------------------------------------------------------
// feature CSV

inline constexpr std::string_view feature_csv_header =
    "feature_id,p1_left,p1_right,p2_left,p2_right";

inline std::vector<FeatureRecord> read_feature_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("feature csv: empty input");
    }
    if (detail::trim_cr(line) != feature_csv_header) {
        throw ValidationError("feature csv: expected header '" +
                              std::string(feature_csv_header) + "'");
    }
    std::vector<FeatureRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::trim_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = detail::split_line(line);
        if (fields.size() != 5) {
            throw ValidationError("feature csv line " + std::to_string(line_no) +
                                  ": expected 5 fields, got " +
                                  std::to_string(fields.size()));
        }
        const std::string where = "feature csv line " + std::to_string(line_no);
        FeatureRecord rec;
        rec.feature_id = fields[0];
        if (rec.feature_id.empty()) {
            throw ValidationError(where + ": empty feature_id");
        }
        rec.p1_left = detail::parse_double(fields[1], where);
        rec.p1_right = detail::parse_double(fields[2], where);
        const bool has_left = !fields[3].empty();
        const bool has_right = !fields[4].empty();
        if (has_left) {
            rec.p2_left = detail::parse_double(fields[3], where);
        }
        if (has_right) {
            rec.p2_right = detail::parse_double(fields[4], where);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<FeatureRecord> read_feature_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open input file: " + path);
    }
    return read_feature_csv(in);
}

inline void write_feature_csv(std::ostream& out,
                              std::span<const FeatureRecord> records) {
    out << feature_csv_header << '\n';
    for (const auto& rec : records) {
        detail::check_plain_field(rec.feature_id, "feature_id");
        out << rec.feature_id << ',' << format_double(rec.p1_left) << ','
            << format_double(rec.p1_right) << ',';
        if (rec.p2_left.has_value()) {
            out << format_double(*rec.p2_left);
        }
        out << ',';
        if (rec.p2_right.has_value()) {
            out << format_double(*rec.p2_right);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// analysis output

inline constexpr std::string_view analysis_csv_header =
    "feature_id,direction,p1_directed,p2_directed,r_fdr,r_fwer,claimed";

inline std::string claimed_code(bool fdr, bool fwer) {
    if (fdr && fwer) {
        return "both";
    }
    if (fdr) {
        return "fdr";
    }
    if (fwer) {
        return "fwer";
    }
    return "none";
}

namespace detail {

inline void append_metadata_lines(std::ostream& out, const AnalysisOutput& result) {
    const AnalysisConfig& cfg = result.meta.config;
    out << "# m=" << cfg.m << '\n';
    out << "# l00=" << format_double(cfg.l00) << '\n';
    out << "# c2=" << format_double(cfg.c2) << '\n';
    out << "# dependency=" << to_string(cfg.dependency) << '\n';
    if (cfg.t.has_value()) {
        out << "# t=" << format_double(*cfg.t) << '\n';
    }
    out << "# level=" << format_double(cfg.level) << '\n';
    out << "# flavors=" << to_string(result.meta.flavors) << '\n';
    if (!result.meta.selection_spec.empty()) {
        out << "# selection=" << result.meta.selection_spec << '\n';
    }
    out << "# records_in=" << result.meta.records_in << '\n';
    out << "# selected=" << result.meta.selected << '\n';
    if (!result.meta.excluded_pprime.empty()) {
        out << "# excluded_pprime=";
        for (std::size_t i = 0; i < result.meta.excluded_pprime.size(); ++i) {
            out << (i > 0 ? ";" : "") << result.meta.excluded_pprime[i];
        }
        out << '\n';
    }
    out << "# tilde_fallback=" << (result.meta.tilde_fallback ? "yes" : "no") << '\n';
    for (const auto& w : result.meta.warnings) {
        out << "# warning=" << w << '\n';
    }
}

}  // namespace detail

inline void write_analysis_csv(std::ostream& out, const AnalysisOutput& result) {
    detail::append_metadata_lines(out, result);
    out << analysis_csv_header << '\n';
    for (const auto& row : result.rows) {
        detail::check_plain_field(row.feature_id, "feature_id");
        out << row.feature_id << ',' << to_string(row.direction) << ','
            << format_double(row.p1_directed) << ',' << format_double(row.p2_directed)
            << ',';
        if (row.r_fdr.has_value()) {
            out << format_double(*row.r_fdr);
        }
        out << ',';
        if (row.r_fwer.has_value()) {
            out << format_double(*row.r_fwer);
        }
        out << ',' << claimed_code(row.claimed_fdr, row.claimed_fwer) << '\n';
    }
}

inline nlohmann::ordered_json analysis_to_json(const AnalysisOutput& result) {
    nlohmann::ordered_json meta;
    const AnalysisConfig& cfg = result.meta.config;
    meta["m"] = cfg.m;
    meta["l00"] = cfg.l00;
    meta["c2"] = cfg.c2;
    meta["dependency"] = std::string(to_string(cfg.dependency));
    if (cfg.t.has_value()) {
        meta["t"] = *cfg.t;
    }
    meta["level"] = cfg.level;
    meta["flavors"] = std::string(to_string(result.meta.flavors));
    if (!result.meta.selection_spec.empty()) {
        meta["selection"] = result.meta.selection_spec;
    }
    meta["records_in"] = result.meta.records_in;
    meta["selected"] = result.meta.selected;
    meta["excluded_pprime"] = result.meta.excluded_pprime;
    meta["tilde_fallback"] = result.meta.tilde_fallback;
    meta["warnings"] = result.meta.warnings;

    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json jrow;
        jrow["feature_id"] = row.feature_id;
        jrow["direction"] = std::string(to_string(row.direction));
        jrow["p1_directed"] = row.p1_directed;
        jrow["p2_directed"] = row.p2_directed;
        jrow["r_fdr"] = row.r_fdr.has_value()
                            ? nlohmann::ordered_json(*row.r_fdr)
                            : nlohmann::ordered_json(nullptr);
        jrow["r_fwer"] = row.r_fwer.has_value()
                             ? nlohmann::ordered_json(*row.r_fwer)
                             : nlohmann::ordered_json(nullptr);
        jrow["claimed"] = claimed_code(row.claimed_fdr, row.claimed_fwer);
        features.push_back(std::move(jrow));
    }
    nlohmann::ordered_json doc;
    doc["metadata"] = std::move(meta);
    doc["features"] = std::move(features);
    return doc;
}

inline void write_analysis_json(std::ostream& out, const AnalysisOutput& result) {
    out << analysis_to_json(result).dump(2) << '\n';
}

/// Analysis output as read back from disk: raw metadata plus typed rows.
struct ParsedAnalysis {
    std::map<std::string, std::string> metadata;
    std::vector<AnalysisRow> rows;
};

namespace detail {

inline void apply_claimed_code(AnalysisRow& row, const std::string& code) {
    if (code == "both") {
        row.claimed_fdr = row.claimed_fwer = true;
    } else if (code == "fdr") {
        row.claimed_fdr = true;
    } else if (code == "fwer") {
        row.claimed_fwer = true;
    } else if (code != "none") {
        throw ValidationError("unknown claimed code: " + code);
    }
}

}  // namespace detail

inline ParsedAnalysis read_analysis_csv(std::istream& in) {
    ParsedAnalysis parsed;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::trim_cr(line);
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            const std::size_t eq = body.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("analysis csv line " + std::to_string(line_no) +
                                      ": malformed metadata line");
            }
            parsed.metadata[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!header_seen) {
            if (line != analysis_csv_header) {
                throw ValidationError("analysis csv: expected header '" +
                                      std::string(analysis_csv_header) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_line(line);
        if (fields.size() != 7) {
            throw ValidationError("analysis csv line " + std::to_string(line_no) +
                                  ": expected 7 fields, got " +
                                  std::to_string(fields.size()));
        }
        const std::string where = "analysis csv line " + std::to_string(line_no);
        AnalysisRow row;
        row.feature_id = fields[0];
        row.direction = parse_direction(fields[1]);
        row.p1_directed = detail::parse_double(fields[2], where);
        row.p2_directed = detail::parse_double(fields[3], where);
        if (!fields[4].empty()) {
            row.r_fdr = detail::parse_double(fields[4], where);
        }
        if (!fields[5].empty()) {
            row.r_fwer = detail::parse_double(fields[5], where);
        }
        detail::apply_claimed_code(row, fields[6]);
        parsed.rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw ValidationError("analysis csv: missing header");
    }
    return parsed;
}

inline ParsedAnalysis read_analysis_json(std::istream& in) {
    nlohmann::json doc;
    in >> doc;
    if (!doc.is_object() || !doc.contains("metadata") || !doc.contains("features")) {
        throw ValidationError("analysis json: expected metadata and features");
    }
    ParsedAnalysis parsed;
    for (const auto& [key, value] : doc["metadata"].items()) {
        parsed.metadata[key] =
            value.is_string() ? value.get<std::string>() : value.dump();
    }
    for (const auto& jrow : doc["features"]) {
        AnalysisRow row;
        row.feature_id = jrow.at("feature_id").get<std::string>();
        row.direction = parse_direction(jrow.at("direction").get<std::string>());
        row.p1_directed = jrow.at("p1_directed").get<double>();
        row.p2_directed = jrow.at("p2_directed").get<double>();
        if (jrow.contains("r_fdr") && !jrow["r_fdr"].is_null()) {
            row.r_fdr = jrow["r_fdr"].get<double>();
        }
        if (jrow.contains("r_fwer") && !jrow["r_fwer"].is_null()) {
            row.r_fwer = jrow["r_fwer"].get<double>();
        }
        detail::apply_claimed_code(row, jrow.at("claimed").get<std::string>());
        parsed.rows.push_back(std::move(row));
    }
    return parsed;
}

// ---------------------------------------------------------------------------
// simulation scenarios and results

namespace detail {

inline void check_keys(const nlohmann::json& obj, const char* what,
                       std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const auto& a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ValidationError(std::string("scenario: unknown key '") + key +
                                  "' in " + what);
        }
    }
}

inline StudyDependence dependence_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ValidationError("scenario: dependence must be an object with a kind");
    }
    check_keys(j, "dependence", {"kind", "rho"});
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "independent") {
        if (j.contains("rho")) {
            throw ValidationError("scenario: rho is only valid with equicorrelated");
        }
        return IndependentDraws{};
    }
    if (kind == "equicorrelated") {
        if (!j.contains("rho") || !j["rho"].is_number()) {
            throw ValidationError("scenario: equicorrelated dependence needs rho");
        }
        return EquicorrelatedDraws{j["rho"].get<double>()};
    }
    throw ValidationError("scenario: unknown dependence kind '" + kind + "'");
}

}  // namespace detail

inline SimScenario scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("scenario: expected a JSON object");
    }
    detail::check_keys(doc, "scenario",
                       {"counts", "effect_size", "primary_dependence",
                        "followup_dependence", "selection", "analysis",
                        "replications", "seed"});
    for (const char* key : {"counts", "selection", "analysis"}) {
        if (!doc.contains(key)) {
            throw ValidationError(std::string("scenario: missing key '") + key + "'");
        }
    }

    SimScenario scenario;
    const nlohmann::json& jcounts = doc["counts"];
    if (!jcounts.is_object()) {
        throw ValidationError("scenario: counts must be an object");
    }
    for (const auto& [key, value] : jcounts.items()) {
        const auto parts = detail::split_line(key);
        if (parts.size() != 2) {
            throw ValidationError("scenario: count key must look like 'h1,h2', got '" +
                                  key + "'");
        }
        const std::int64_t h1 = detail::parse_int64(parts[0], "scenario counts");
        const std::int64_t h2 = detail::parse_int64(parts[1], "scenario counts");
        const HypothesisConfig h{static_cast<int>(h1), static_cast<int>(h2)};
        if (!h.valid()) {
            throw ValidationError("scenario: count key '" + key +
                                  "' is not a hypothesis configuration");
        }
        if (!value.is_number_integer()) {
            throw ValidationError("scenario: count for '" + key +
                                  "' must be an integer");
        }
        scenario.counts.at(h.h1, h.h2) = value.get<std::int64_t>();
    }

    if (doc.contains("effect_size")) {
        if (!doc["effect_size"].is_number()) {
            throw ValidationError("scenario: effect_size must be a number");
        }
        scenario.effect_size = doc["effect_size"].get<double>();
    }
    if (doc.contains("primary_dependence")) {
        scenario.primary_dependence =
            detail::dependence_from_json(doc["primary_dependence"]);
    }
    if (doc.contains("followup_dependence")) {
        scenario.followup_dependence =
            detail::dependence_from_json(doc["followup_dependence"]);
    }
    if (!doc["selection"].is_string()) {
        throw ValidationError("scenario: selection must be a rule spec string");
    }
    scenario.selection = parse_selection_spec(doc["selection"].get<std::string>());

    const nlohmann::json& janalysis = doc["analysis"];
    if (!janalysis.is_object()) {
        throw ValidationError("scenario: analysis must be an object");
    }
    detail::check_keys(janalysis, "analysis",
                       {"m", "l00", "c2", "dependency", "t", "flavor", "level"});
    AnalysisConfig cfg;
    cfg.m = scenario.counts.total();
    if (janalysis.contains("m")) {
        if (!janalysis["m"].is_number_integer() ||
            janalysis["m"].get<std::int64_t>() != cfg.m) {
            throw ValidationError(
                "scenario: analysis m disagrees with the count total");
        }
    }
    if (janalysis.contains("l00")) {
        cfg.l00 = janalysis["l00"].get<double>();
    }
    if (janalysis.contains("c2")) {
        cfg.c2 = janalysis["c2"].get<double>();
    }
    if (janalysis.contains("dependency")) {
        cfg.dependency = parse_dependency(janalysis["dependency"].get<std::string>());
    }
    if (janalysis.contains("t")) {
        cfg.t = janalysis["t"].get<double>();
    }
    if (janalysis.contains("flavor")) {
        cfg.flavor = parse_flavor(janalysis["flavor"].get<std::string>());
    }
    if (janalysis.contains("level")) {
        cfg.level = janalysis["level"].get<double>();
    }
    scenario.analysis = cfg;

    if (doc.contains("replications")) {
        if (!doc["replications"].is_number_integer()) {
            throw ValidationError("scenario: replications must be an integer");
        }
        scenario.replications = doc["replications"].get<std::int64_t>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) {
            throw ValidationError("scenario: seed must be an integer");
        }
        scenario.seed = doc["seed"].get<std::uint64_t>();
    }
    scenario.validate();
    return scenario;
}

inline SimScenario read_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open scenario file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("scenario file " + path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

inline constexpr std::string_view sim_csv_header =
    "replications_run,empirical_fdr,mc_se_fdr,empirical_fwer,mc_se_fwer,mean_power,"
    "empty_selection_fraction,theoretical_fdr_bound";

namespace detail {

inline void append_scenario_metadata(std::ostream& out, const SimScenario& scenario,
                                     const SimResult& result) {
    out << "# m=" << scenario.m() << '\n';
    for (int idx = 0; idx < 9; ++idx) {
        const auto count = scenario.counts.n[static_cast<std::size_t>(idx)];
        if (count > 0) {
            out << "# count:" << HypothesisConfig::from_index(idx).key() << '='
                << count << '\n';
        }
    }
    out << "# effect_size=" << format_double(scenario.effect_size) << '\n';
    out << "# primary_dependence=" << dependence_spec(scenario.primary_dependence)
        << '\n';
    out << "# followup_dependence=" << dependence_spec(scenario.followup_dependence)
        << '\n';
    out << "# selection=" << to_spec_string(scenario.selection) << '\n';
    out << "# l00=" << format_double(scenario.analysis.l00) << '\n';
    out << "# c2=" << format_double(scenario.analysis.c2) << '\n';
    out << "# dependency=" << to_string(scenario.analysis.dependency) << '\n';
    if (scenario.analysis.t.has_value()) {
        out << "# t=" << format_double(*scenario.analysis.t) << '\n';
    }
    out << "# flavor=" << to_string(scenario.analysis.flavor) << '\n';
    out << "# level=" << format_double(scenario.analysis.level) << '\n';
    out << "# replications=" << scenario.replications << '\n';
    out << "# seed=" << scenario.seed << '\n';
    out << "# control_guarantee=" << (result.control_guarantee ? "yes" : "no")
        << '\n';
    for (const auto& w : result.warnings) {
        out << "# warning=" << w << '\n';
    }
}

}  // namespace detail

inline void write_sim_result_csv(std::ostream& out, const SimScenario& scenario,
                                 const SimResult& result) {
    detail::append_scenario_metadata(out, scenario, result);
    const double bound =
        theoretical_fdr_bound(scenario.counts, scenario.analysis.level,
                              scenario.analysis.l00, scenario.analysis.c2,
                              scenario.m());
    out << sim_csv_header << '\n';
    out << result.replications_run << ',' << format_double(result.empirical_fdr)
        << ',' << format_double(result.mc_se_fdr) << ','
        << format_double(result.empirical_fwer) << ','
        << format_double(result.mc_se_fwer) << ','
        << format_double(result.mean_power) << ','
        << format_double(result.empty_selection_fraction) << ','
        << format_double(bound) << '\n';
}

inline void write_sim_result_json(std::ostream& out, const SimScenario& scenario,
                                  const SimResult& result) {
    nlohmann::ordered_json jscenario;
    jscenario["m"] = scenario.m();
    nlohmann::ordered_json jcounts;
    for (int idx = 0; idx < 9; ++idx) {
        const auto count = scenario.counts.n[static_cast<std::size_t>(idx)];
        if (count > 0) {
            jcounts[HypothesisConfig::from_index(idx).key()] = count;
        }
    }
    jscenario["counts"] = std::move(jcounts);
    jscenario["effect_size"] = scenario.effect_size;
    jscenario["primary_dependence"] = dependence_spec(scenario.primary_dependence);
    jscenario["followup_dependence"] = dependence_spec(scenario.followup_dependence);
    jscenario["selection"] = to_spec_string(scenario.selection);
    jscenario["l00"] = scenario.analysis.l00;
    jscenario["c2"] = scenario.analysis.c2;
    jscenario["dependency"] = std::string(to_string(scenario.analysis.dependency));
    if (scenario.analysis.t.has_value()) {
        jscenario["t"] = *scenario.analysis.t;
    }
    jscenario["flavor"] = std::string(to_string(scenario.analysis.flavor));
    jscenario["level"] = scenario.analysis.level;
    jscenario["replications"] = scenario.replications;
    jscenario["seed"] = scenario.seed;

    nlohmann::ordered_json jresult;
    jresult["replications_run"] = result.replications_run;
    jresult["empirical_fdr"] = result.empirical_fdr;
    jresult["mc_se_fdr"] = result.mc_se_fdr;
    jresult["empirical_fwer"] = result.empirical_fwer;
    jresult["mc_se_fwer"] = result.mc_se_fwer;
    jresult["se_valid"] = result.se_valid;
    jresult["mean_power"] = result.mean_power;
    jresult["empty_selection_fraction"] = result.empty_selection_fraction;
    jresult["control_guarantee"] = result.control_guarantee;
    jresult["theoretical_fdr_bound"] =
        theoretical_fdr_bound(scenario.counts, scenario.analysis.level,
                              scenario.analysis.l00, scenario.analysis.c2,
                              scenario.m());
    jresult["warnings"] = result.warnings;

    nlohmann::ordered_json doc;
    doc["scenario"] = std::move(jscenario);
    doc["result"] = std::move(jresult);
    out << doc.dump(2) << '\n';
}

}  // namespace repliq
