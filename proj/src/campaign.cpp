#include "lintest/campaign.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lintest {

BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                 double alpha) {
    if (trials == 0) throw std::invalid_argument("interval needs at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("alpha must lie in (0, 1)");
    using boost::math::binomial_distribution;
    BinomialInterval ci;
    ci.lower = binomial_distribution<>::find_lower_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes), alpha / 2);
    ci.upper = binomial_distribution<>::find_upper_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes), alpha / 2);
    return ci;
}

CampaignResult run_campaign(std::uint64_t trials, std::uint64_t seed,
                            unsigned workers, const TrialFn& fn) {
    if (trials == 0) throw std::invalid_argument("campaign needs at least one trial");
    if (!fn) throw std::invalid_argument("campaign needs a trial function");
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

    CampaignResult result;
    result.trials.resize(trials);

    // Each trial derives its own seed from (seed, index), so the outcome of
    // trial i never depends on worker count or interleaving.
    auto run_range = [&](std::uint64_t begin, std::uint64_t step) {
        for (std::uint64_t i = begin; i < trials; i += step) {
            std::uint64_t trial_seed = derive_seed(seed, i);
            BitStream bits(trial_seed);
            TrialRecord& record = result.trials[i];
            record.index = i;
            record.seed = trial_seed;
            record.verdict = fn(i, bits);
        }
    };

    if (workers == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    run_range(w, workers);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (const TrialRecord& record : result.trials) {
        if (!record.verdict.passed()) ++result.fail_count;
        result.total_queries += record.verdict.queries_used;
        result.max_queries = std::max(result.max_queries, record.verdict.queries_used);
    }
    result.fail_rate = Rational(Int(result.fail_count), Int(trials));
    result.fail_rate_ci = clopper_pearson(result.fail_count, trials);
    return result;
}

}  // namespace lintest
