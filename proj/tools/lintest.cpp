// lintest: randomized self-testing, property testing, and result checking for
// programs claiming to compute linear functions over n-bit integer domains.
//
// Subcommands:
//   selftest   two-phase randomized test of P against f(x) = b*x
//   proptest   linearity test with no claimed b (learns it from P(2^n))
//   homtest    two-phase test of a claimed linear map on D_n^m
//   check      self-test plus a final split check at one input a
//   analyze    exact small-domain analysis of a simulated faulty program
//   calibrate  budget derivation and its detection certificates
//
// Verdicts are data: every run exits 0 and reports PASS/FAIL counts in a JSON
// report.  Nonzero exits mean the run itself could not be carried out.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "lintest/adversaries.hpp"
#include "lintest/analysis.hpp"
#include "lintest/campaign.hpp"
#include "lintest/errors.hpp"
#include "lintest/report.hpp"
#include "lintest/testers.hpp"

namespace {

using namespace lintest;

struct RawOptions {
    std::string b_text = "7";
    std::string epsilon_text = "1/8";
    std::string beta_text;
    std::string alpha_text = "2/3";
    std::string fault_text = "correct";
    std::string a_text = "0";
    std::optional<unsigned> m;
    std::optional<std::uint32_t> k1;
    std::optional<std::uint32_t> k2;
};

std::vector<Int> parse_coefficients(const std::string& text) {
    std::vector<Int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_int(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("need at least one coefficient");
    return out;
}

void add_common_options(CLI::App* cmd, RunConfig& config, RawOptions& raw,
                        bool with_fault = true) {
    cmd->add_option("--n", config.n, "domain bit width")->capture_default_str();
    cmd->add_option("--b", raw.b_text,
                    "claimed coefficient(s), comma-separated for vector domains")
        ->capture_default_str();
    cmd->add_option("--epsilon", raw.epsilon_text, "closeness parameter (p/q)")
        ->capture_default_str();
    cmd->add_option("--beta", raw.beta_text, "pairing slack (p/q; default epsilon/4)");
    cmd->add_option("--alpha", raw.alpha_text, "unusable-split-point cap (p/q)")
        ->capture_default_str();
    cmd->add_option("--k1", raw.k1, "override pairing rounds");
    cmd->add_option("--k2", raw.k2, "override split rounds");
    cmd->add_option("--seed", config.seed, "campaign seed")->capture_default_str();
    cmd->add_option("--trials", config.trials, "independent repetitions")
        ->capture_default_str();
    cmd->add_option("--workers,--parallel", config.workers,
                    "worker threads (0 = all hardware threads)")
        ->capture_default_str();
    cmd->add_option("--output", config.output_path, "write the JSON report here (default stdout)");
    if (with_fault) {
        cmd->add_option("--fault", raw.fault_text,
                        "simulated fault (kind[:args]); see README for the grammar")
            ->capture_default_str();
        cmd->add_option("--fault-seed", config.fault.site_seed, "fault site-selection seed")
            ->capture_default_str();
    }
}

// Resolve the parsed strings into the typed config; throws on bad input.
void finish_config(RunConfig& config, const RawOptions& raw) {
    config.coefficients = parse_coefficients(raw.b_text);
    config.epsilon = parse_rational(raw.epsilon_text);
    if (!raw.beta_text.empty()) config.beta = parse_rational(raw.beta_text);
    config.alpha = parse_rational(raw.alpha_text);
    config.pairing_rounds_override = raw.k1;
    config.split_rounds_override = raw.k2;

    std::uint64_t fault_seed = config.fault.site_seed;
    config.fault = parse_fault_spec(raw.fault_text);
    config.fault.site_seed = fault_seed;

    if (raw.m) {
        config.m = *raw.m;
        if (config.coefficients.size() == 1 && config.m > 1)
            config.coefficients.assign(config.m, config.coefficients[0]);
    } else {
        config.m = static_cast<unsigned>(config.coefficients.size());
    }
    if (config.coefficients.size() != config.m)
        throw DimensionMismatch("got " + std::to_string(config.coefficients.size()) +
                                " coefficients for dimension " + std::to_string(config.m));
}

BudgetDerivation resolve_budget(const RunConfig& config) {
    BudgetDerivation derivation =
        config.beta ? budget_for(config.epsilon, *config.beta, config.alpha)
                    : budget_for(config.epsilon);
    if (config.pairing_rounds_override) {
        if (*config.pairing_rounds_override == 0)
            throw InvalidBudget("k1 override must be positive");
        derivation.budget.pairing_rounds = *config.pairing_rounds_override;
    }
    if (config.split_rounds_override) {
        if (*config.split_rounds_override == 0)
            throw InvalidBudget("k2 override must be positive");
        derivation.budget.split_rounds = *config.split_rounds_override;
    }
    return derivation;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void require_scalar(const RunConfig& config, const char* command) {
    if (config.m != 1)
        throw DimensionMismatch(std::string(command) + " works on the scalar domain; use "
                                                       "homtest for vector domains");
}

int run_scalar_campaign(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    LinearSpec spec(config.coefficients[0], DomainParams(config.n));
    BudgetDerivation derivation = resolve_budget(config);
    auto program = materialize(config.fault, spec);

    std::vector<std::optional<Int>> learned;
    TrialFn fn;
    if (config.command == "selftest") {
        fn = [&](std::uint64_t, BitStream& bits) {
            return self_test(spec, *program, derivation.budget, bits);
        };
    } else if (config.command == "proptest") {
        learned.resize(config.trials);
        fn = [&](std::uint64_t i, BitStream& bits) {
            GeneralLinearResult r =
                general_linear_test(*program, spec.domain(), derivation.budget, bits);
            learned[i] = r.learned_coefficient;
            return r.verdict;
        };
    } else {  // check
        fn = [&](std::uint64_t, BitStream& bits) {
            return check_input(config.check_point, spec, *program, derivation.budget, bits);
        };
    }

    CampaignResult result = run_campaign(config.trials, config.seed, config.workers, fn);

    TrialExtra extra;
    if (config.command == "proptest") {
        extra = [&](const TrialRecord& record, nlohmann::ordered_json& t) {
            const auto& l = learned[record.index];
            if (l) t["learned_b"] = l->str();
        };
    }
    auto report = campaign_report(config, derivation, &program->stats(), result,
                                  /*pairing_resamples=*/0, extra, elapsed_ms(start));
    write_report(report, config.output_path);
    return 0;
}

int run_hom_campaign(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    LinearSpec spec(config.coefficients, VectorDomainParams(config.n, config.m));
    BudgetDerivation derivation = resolve_budget(config);
    auto program = materialize_vector(config.fault, spec);

    std::vector<std::uint64_t> resamples(config.trials, 0);
    TrialFn fn = [&](std::uint64_t i, BitStream& bits) {
        HomTestResult r = hom_self_test(spec, *program, derivation.budget, bits);
        resamples[i] = r.pairing_resamples;
        return r.verdict;
    };
    CampaignResult result = run_campaign(config.trials, config.seed, config.workers, fn);

    std::uint64_t total_resamples = 0;
    for (std::uint64_t r : resamples) total_resamples += r;
    auto report = campaign_report(config, derivation, &program->stats(), result,
                                  total_resamples, TrialExtra{}, elapsed_ms(start));
    write_report(report, config.output_path);
    return 0;
}

int run_analyze(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, Rational>> exact_values;
    std::vector<BoundCheck> bounds;
    std::vector<std::pair<std::string, Rational>> mc_values;
    std::optional<NearestLinear> nearest;
    ScanLimits limits = ScanLimits::defaults();

    if (config.m == 1) {
        LinearSpec spec(config.coefficients[0], DomainParams(config.n));
        auto program = materialize(config.fault, spec);
        DiscrepancyScan scan(spec, *program, limits);
        const DiscrepancyProfile& prof = scan.profile();

        Rational pairing = scan.pairing_fail_prob();
        exact_values.emplace_back("pairing_fail_prob", pairing);

        bounds.push_back(make_bound_check(
            "epsilon0_equals_epsilon1_plus_epsilon2", prof.epsilon0, "==",
            prof.epsilon1 + prof.epsilon2));
        bounds.push_back(make_bound_check("adversary_stats_match_scan",
                                          program->stats().epsilon0, "==", prof.epsilon0));
        Rational imbalance = prof.epsilon1 >= prof.epsilon2 ? prof.epsilon1 - prof.epsilon2
                                                            : prof.epsilon2 - prof.epsilon1;
        bounds.push_back(
            make_bound_check("pairing_fail_at_least_sign_imbalance", pairing, ">=", imbalance));

        if (config.n <= limits.pair_scan_bits) {
            Rational overall = scan.split_fail_prob_overall();
            exact_values.emplace_back("split_fail_prob_overall", overall);

            Int domain = pow2(config.n);
            Rational avg_matches(scan.opposite_sign_match_total(), domain);
            Rational expected = prof.epsilon1 * prof.epsilon2 * Rational(domain);
            bounds.push_back(make_bound_check("average_opposite_sign_matches_identity",
                                              avg_matches, "==", expected));
            Rational half = prof.epsilon0 / 2;
            bounds.push_back(make_bound_check("average_opposite_sign_matches_bound",
                                              avg_matches, "<=",
                                              half * half * Rational(domain)));
            Rational bad_fraction(scan.bad_point_count(config.alpha), domain);
            bounds.push_back(
                make_bound_check("bad_point_fraction", bad_fraction, "<=", config.alpha));
        }

        nearest = nearest_linear(*program, limits);

        if (config.mc_samples > 0) {
            BitStream bits(config.seed);
            mc_values.emplace_back(
                "pairing_fail_rate",
                mc_pairing_fail_rate(spec, *program, config.mc_samples, bits));
            mc_values.emplace_back(
                "split_fail_rate",
                mc_split_fail_rate(spec, *program, config.mc_samples, bits));
        }

        auto report = analysis_report(config, &program->stats(), prof, exact_values, bounds,
                                      nearest, mc_values, elapsed_ms(start));
        write_report(report, config.output_path);
        return 0;
    }

    LinearSpec spec(config.coefficients, VectorDomainParams(config.n, config.m));
    auto program = materialize_vector(config.fault, spec);
    VectorDiscrepancyScan scan(spec, *program, limits);
    const DiscrepancyProfile& prof = scan.profile();

    exact_values.emplace_back("pairing_fail_prob", scan.pairing_fail_prob());
    bounds.push_back(make_bound_check("epsilon0_equals_epsilon1_plus_epsilon2", prof.epsilon0,
                                      "==", prof.epsilon1 + prof.epsilon2));
    bounds.push_back(make_bound_check("adversary_stats_match_scan", program->stats().epsilon0,
                                      "==", prof.epsilon0));

    auto report = analysis_report(config, &program->stats(), prof, exact_values, bounds,
                                  nearest, mc_values, elapsed_ms(start));
    write_report(report, config.output_path);
    return 0;
}

int run_calibrate(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    BudgetDerivation derivation = resolve_budget(config);
    ChernoffQuery pairing_cert =
        chernoff_certificate(derivation.pairing_detect_p, derivation.budget.pairing_rounds);
    ChernoffQuery split_cert =
        chernoff_certificate(derivation.split_detect_p, derivation.budget.split_rounds);
    auto report =
        calibration_report(config, derivation, pairing_cert, split_cert, elapsed_ms(start));
    write_report(report, config.output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized self-testing and checking for linear functions"};
    app.require_subcommand(1);

    RunConfig config;
    RawOptions raw;

    CLI::App* selftest = app.add_subcommand(
        "selftest", "test a program against a claimed f(x) = b*x");
    add_common_options(selftest, config, raw);

    CLI::App* proptest = app.add_subcommand(
        "proptest", "test linearity with no claimed coefficient");
    add_common_options(proptest, config, raw);

    CLI::App* homtest = app.add_subcommand(
        "homtest", "test a claimed linear map on an m-dimensional domain");
    add_common_options(homtest, config, raw);
    unsigned m_value = 0;
    homtest->add_option("--m", m_value, "domain dimension (default: number of coefficients)");

    CLI::App* check = app.add_subcommand(
        "check", "self-test, then check the program's answer at one input");
    add_common_options(check, config, raw);
    check->add_option("--a", raw.a_text, "the input whose answer is being checked")
        ->required();

    CLI::App* analyze = app.add_subcommand(
        "analyze", "exact discrepancy analysis of a simulated fault");
    add_common_options(analyze, config, raw);
    analyze->add_option("--mc-samples", config.mc_samples,
                        "add sampled estimates with this many draws");
    unsigned analyze_m = 0;
    analyze->add_option("--m", analyze_m, "domain dimension (default: number of coefficients)");

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "derive iteration counts for an epsilon and show certificates");
    add_common_options(calibrate, config, raw, /*with_fault=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (homtest->parsed() && homtest->count("--m")) raw.m = m_value;
        if (analyze->parsed() && analyze->count("--m")) raw.m = analyze_m;
        config.command = app.get_subcommands().front()->get_name();
        finish_config(config, raw);

        if (selftest->parsed() || proptest->parsed() || check->parsed()) {
            require_scalar(config, config.command.c_str());
            if (check->parsed()) config.check_point = parse_int(raw.a_text);
            return run_scalar_campaign(config);
        }
        if (homtest->parsed()) return run_hom_campaign(config);
        if (analyze->parsed()) return run_analyze(config);
        return run_calibrate(config);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 3;
    }
}
