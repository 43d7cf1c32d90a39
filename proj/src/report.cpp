#include "lintest/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lintest/version.hpp"

namespace lintest {

namespace {

using nlohmann::ordered_json;

// Integers and rationals are serialized as strings: they can exceed any JSON
// number width, and strings keep reports byte-stable across platforms.
ordered_json js(const Int& v) { return v.str(); }
ordered_json js(const Rational& v) { return format_rational(v); }

ordered_json point_json(const std::vector<Int>& point) {
    ordered_json arr = ordered_json::array();
    for (const Int& c : point) arr.push_back(js(c));
    return arr;
}

ordered_json config_json(const RunConfig& config) {
    ordered_json j;
    j["n"] = config.n;
    j["m"] = config.m;
    ordered_json coeffs = ordered_json::array();
    for (const Int& b : config.coefficients) coeffs.push_back(js(b));
    j["b"] = coeffs;
    j["epsilon"] = js(config.epsilon);
    if (config.beta) j["beta"] = js(*config.beta);
    j["alpha"] = js(config.alpha);
    j["fault"] = format_fault_spec(config.fault);
    j["fault_seed"] = config.fault.site_seed;
    j["seed"] = config.seed;
    j["trials"] = config.trials;
    j["workers"] = config.workers;
    if (config.command == "check") j["a"] = js(config.check_point);
    if (config.mc_samples > 0) j["mc_samples"] = config.mc_samples;
    return j;
}

ordered_json header_json(const RunConfig& config) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = config.command;
    j["config"] = config_json(config);
    return j;
}

ordered_json budget_json(const BudgetDerivation& derivation) {
    ordered_json j;
    j["k1"] = derivation.budget.pairing_rounds;
    j["k2"] = derivation.budget.split_rounds;
    j["epsilon"] = js(derivation.budget.epsilon);
    j["beta"] = js(derivation.beta);
    j["alpha"] = js(derivation.alpha);
    j["pairing_detect_p"] = js(derivation.pairing_detect_p);
    j["split_detect_p"] = js(derivation.split_detect_p);
    j["target_confidence"] = js(derivation.target_confidence);
    return j;
}

ordered_json stats_json(const MaterializedStats& stats) {
    ordered_json j;
    j["epsilon0"] = js(stats.epsilon0);
    j["epsilon1"] = js(stats.epsilon1);
    j["epsilon2"] = js(stats.epsilon2);
    j["fault_count"] = js(stats.fault_count);
    j["domain_size"] = js(stats.domain_size);
    return j;
}

ordered_json verdict_json(const Verdict& verdict) {
    ordered_json j;
    j["outcome"] = to_string(verdict.outcome);
    j["queries"] = verdict.queries_used;
    if (!verdict.passed()) {
        j["failure_site"] = to_string(verdict.failure_site);
        ordered_json witness = ordered_json::array();
        for (const WitnessEntry& entry : verdict.witness) {
            witness.push_back(ordered_json{{"point", point_json(entry.point)},
                                           {"answer", js(entry.answer)}});
        }
        j["witness"] = witness;
    }
    return j;
}

}  // namespace

BoundCheck make_bound_check(std::string name, const Rational& lhs,
                            std::string relation, const Rational& rhs) {
    BoundCheck check;
    check.name = std::move(name);
    check.lhs = lhs;
    check.relation = std::move(relation);
    check.rhs = rhs;
    if (check.relation == "<=") check.holds = lhs <= rhs;
    else if (check.relation == ">=") check.holds = lhs >= rhs;
    else if (check.relation == "==") check.holds = lhs == rhs;
    else throw std::invalid_argument("unknown relation: " + check.relation);
    return check;
}

nlohmann::ordered_json campaign_report(const RunConfig& config,
                                       const BudgetDerivation& derivation,
                                       const MaterializedStats* adversary_stats,
                                       const CampaignResult& result,
                                       std::uint64_t pairing_resamples,
                                       const TrialExtra& trial_extra,
                                       double wall_time_ms) {
    ordered_json j = header_json(config);
    j["budget"] = budget_json(derivation);
    if (adversary_stats) j["adversary"] = stats_json(*adversary_stats);

    ordered_json trials = ordered_json::array();
    for (const TrialRecord& record : result.trials) {
        ordered_json t;
        t["trial"] = record.index;
        t["seed"] = record.seed;
        ordered_json v = verdict_json(record.verdict);
        t.update(v);
        if (trial_extra) trial_extra(record, t);
        trials.push_back(std::move(t));
    }
    j["trials"] = trials;

    ordered_json aggregate;
    aggregate["trials"] = result.trials.size();
    aggregate["fail_count"] = result.fail_count;
    aggregate["pass_count"] = result.trials.size() - result.fail_count;
    aggregate["fail_rate"] = js(result.fail_rate);
    aggregate["fail_rate_value"] = to_double(result.fail_rate);
    aggregate["fail_rate_ci95"] =
        ordered_json{{"lower", result.fail_rate_ci.lower}, {"upper", result.fail_rate_ci.upper}};
    aggregate["total_queries"] = result.total_queries;
    aggregate["max_queries"] = result.max_queries;
    if (pairing_resamples > 0) aggregate["pairing_resamples"] = pairing_resamples;
    j["aggregate"] = aggregate;

    j["wall_time_ms"] = wall_time_ms;
    return j;
}

nlohmann::ordered_json analysis_report(
    const RunConfig& config, const MaterializedStats* adversary_stats,
    const DiscrepancyProfile& profile,
    const std::vector<std::pair<std::string, Rational>>& exact_values,
    const std::vector<BoundCheck>& bounds,
    const std::optional<NearestLinear>& nearest,
    const std::vector<std::pair<std::string, Rational>>& mc_values,
    double wall_time_ms) {
    ordered_json j = header_json(config);
    if (adversary_stats) j["adversary"] = stats_json(*adversary_stats);

    ordered_json p;
    p["scan_bits"] = profile.bits;
    p["num_zero"] = js(profile.num_zero);
    p["num_positive"] = js(profile.num_positive);
    p["num_negative"] = js(profile.num_negative);
    p["epsilon0"] = js(profile.epsilon0);
    p["epsilon1"] = js(profile.epsilon1);
    p["epsilon2"] = js(profile.epsilon2);
    j["profile"] = p;

    ordered_json exact;
    for (const auto& [name, value] : exact_values) {
        exact[name] = ordered_json{{"exact", js(value)}, {"value", to_double(value)}};
    }
    j["exact"] = exact;

    ordered_json bound_list = ordered_json::array();
    for (const BoundCheck& check : bounds) {
        bound_list.push_back(ordered_json{{"name", check.name},
                                          {"lhs", js(check.lhs)},
                                          {"relation", check.relation},
                                          {"rhs", js(check.rhs)},
                                          {"holds", check.holds}});
    }
    j["bounds"] = bound_list;

    if (nearest) {
        j["nearest_linear"] = ordered_json{{"b", js(nearest->coefficient)},
                                           {"agreement_count", js(nearest->agreement_count)},
                                           {"distance", js(nearest->distance)},
                                           {"distance_value", to_double(nearest->distance)}};
    }
    if (!mc_values.empty()) {
        ordered_json mc;
        for (const auto& [name, value] : mc_values)
            mc[name] = ordered_json{{"estimate", js(value)}, {"value", to_double(value)}};
        j["mc"] = mc;
    }

    j["wall_time_ms"] = wall_time_ms;
    return j;
}

nlohmann::ordered_json calibration_report(const RunConfig& config,
                                          const BudgetDerivation& derivation,
                                          const ChernoffQuery& pairing_cert,
                                          const ChernoffQuery& split_cert,
                                          double wall_time_ms) {
    ordered_json j = header_json(config);
    j["budget"] = budget_json(derivation);

    auto cert_json = [](const ChernoffQuery& cert) {
        return ordered_json{{"p", format_rational(cert.p)},
                            {"trials", cert.trials},
                            {"expected_detections", format_rational(cert.p * Rational(Int(cert.trials)))},
                            {"failure_bound", cert.failure_bound}};
    };
    j["certificates"] = ordered_json{{"pairing", cert_json(pairing_cert)},
                                     {"split", cert_json(split_cert)}};
    j["wall_time_ms"] = wall_time_ms;
    return j;
}

std::string render_report(const nlohmann::ordered_json& report) {
    return report.dump(2) + "\n";
}

void write_report(const nlohmann::ordered_json& report, const std::string& path) {
    std::string text = render_report(report);
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

}  // namespace lintest
