#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lintest/adversaries.hpp"
#include "lintest/analysis.hpp"
#include "lintest/campaign.hpp"
#include "lintest/ints.hpp"
#include "lintest/testers.hpp"

namespace lintest {

// Everything a run needs, as parsed from the command line.  Reports echo the
// whole configuration so a run can be reproduced from its report alone.
struct RunConfig {
    std::string command;
    unsigned n = 16;
    unsigned m = 1;
    std::vector<Int> coefficients = {Int(7)};
    Rational epsilon = Rational(1, 8);
    std::optional<Rational> beta;  // defaults to epsilon/4
    Rational alpha = Rational(2, 3);
    std::optional<std::uint32_t> pairing_rounds_override;
    std::optional<std::uint32_t> split_rounds_override;
    FaultSpec fault;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    unsigned workers = 1;
    Int check_point = 0;        // `check`: the input being checked
    std::uint64_t mc_samples = 0;  // `analyze`: optional sampled cross-check
    std::string output_path;    // empty writes to stdout
};

// One named inequality/equality verified by the analyze command.
struct BoundCheck {
    std::string name;
    Rational lhs = 0;
    std::string relation;  // "<=", ">=", "=="
    Rational rhs = 0;
    bool holds = false;
};

BoundCheck make_bound_check(std::string name, const Rational& lhs,
                            std::string relation, const Rational& rhs);

// JSON encoders.  All integers and rationals are rendered as decimal /
// "p/q" strings so reports are exact and byte-stable; doubles appear only in
// convenience "_value" fields and confidence intervals.  Key order is fixed.
// wall_time_ms is always the final key, so reproducibility checks can strip
// it and compare the rest byte-for-byte.
using TrialExtra = std::function<void(const TrialRecord&, nlohmann::ordered_json&)>;

nlohmann::ordered_json campaign_report(const RunConfig& config,
                                       const BudgetDerivation& derivation,
                                       const MaterializedStats* adversary_stats,
                                       const CampaignResult& result,
                                       std::uint64_t pairing_resamples,
                                       const TrialExtra& trial_extra,
                                       double wall_time_ms);

nlohmann::ordered_json analysis_report(
    const RunConfig& config, const MaterializedStats* adversary_stats,
    const DiscrepancyProfile& profile,
    const std::vector<std::pair<std::string, Rational>>& exact_values,
    const std::vector<BoundCheck>& bounds,
    const std::optional<NearestLinear>& nearest,
    const std::vector<std::pair<std::string, Rational>>& mc_values,
    double wall_time_ms);

nlohmann::ordered_json calibration_report(const RunConfig& config,
                                          const BudgetDerivation& derivation,
                                          const ChernoffQuery& pairing_cert,
                                          const ChernoffQuery& split_cert,
                                          double wall_time_ms);

std::string render_report(const nlohmann::ordered_json& report);
void write_report(const nlohmann::ordered_json& report, const std::string& path);

}  // namespace lintest
