#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lintest/ints.hpp"
#include "lintest/random.hpp"
#include "lintest/testers.hpp"

namespace lintest {

struct TrialRecord {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;  // derived seed this trial ran under
    Verdict verdict;
};

// Two-sided Clopper-Pearson interval for a binomial proportion.
struct BinomialInterval {
    double lower = 0.0;
    double upper = 1.0;
};
BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                 double alpha = 0.05);

struct CampaignResult {
    std::vector<TrialRecord> trials;
    std::uint64_t fail_count = 0;
    Rational fail_rate = 0;
    BinomialInterval fail_rate_ci;  // 95% Clopper-Pearson
    std::uint64_t total_queries = 0;
    std::uint64_t max_queries = 0;
};

// Run `trials` independent repetitions of a tester.  Trial i gets a fresh
// BitStream seeded with derive_seed(seed, i), so results are identical for
// any worker count and any scheduling; workers > 1 shards the index space
// across threads.  workers == 0 means one per hardware thread.
using TrialFn = std::function<Verdict(std::uint64_t trial_index, BitStream& bits)>;
CampaignResult run_campaign(std::uint64_t trials, std::uint64_t seed,
                            unsigned workers, const TrialFn& fn);

}  // namespace lintest
