#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lintest/ints.hpp"
#include "lintest/oracle.hpp"
#include "lintest/random.hpp"

namespace lintest {

// Iteration counts for the two-phase linearity test: pairing_rounds draws of
// the P(x) + P(a-x) identity, split_rounds draws of the random-split
// identity.  epsilon is the closeness parameter the budget was derived for
// (testers validate 0 < epsilon < 2/3).
struct Budget {
    std::uint32_t pairing_rounds = 0;
    std::uint32_t split_rounds = 0;
    Rational epsilon = 0;
};

// Derived alongside a budget: the per-iteration detection probabilities the
// iteration counts were sized against.
struct BudgetDerivation {
    Budget budget;
    Rational beta;              // pairing slack parameter
    Rational alpha;             // cap on the fraction of unusable split points
    Rational pairing_detect_p;  // lower bound on per-pairing-round detection
    Rational split_detect_p;    // lower bound on per-split-round detection
    Rational target_confidence; // overall confidence the budget certifies
};

// Size a budget for closeness epsilon at the standard operating point
// (beta = epsilon/4, alpha = 2/3, per-phase confidence 7/8, overall 3/4).
// Iteration counts are ceil(6/p) for the respective detection probability p;
// a Chernoff certificate for that choice is validated by chernoff_trials.
BudgetDerivation budget_for(const Rational& epsilon);
BudgetDerivation budget_for(const Rational& epsilon, const Rational& beta,
                            const Rational& alpha);

enum class Outcome { Pass, Fail };

enum class FailureSite {
    None,
    PairingLoop,        // P(x) + P(a-x) identity violated
    SplitLoop,          // random-split identity violated
    DivisibilityCheck,  // P(2^n) not divisible by 2^n
    FinalSplit,         // split identity violated at the checked input itself
};

const char* to_string(Outcome o);
const char* to_string(FailureSite s);
std::optional<FailureSite> failure_site_from_string(const std::string& name);

// One oracle query that participated in a violated identity: the point asked
// and the answer received.  Scalar points are stored as a 1-vector.
struct WitnessEntry {
    std::vector<Int> point;
    Int answer;
};

// What a tester run produced.  On Fail, `witness` holds every query of the
// violated identity, in the order asked, so the refutation can be replayed
// against the same program.  queries_used counts oracle calls made by this
// run alone (the CLI and tests pin its bounds).
struct Verdict {
    Outcome outcome = Outcome::Pass;
    FailureSite failure_site = FailureSite::None;
    std::vector<WitnessEntry> witness;
    std::uint64_t queries_used = 0;

    bool passed() const { return outcome == Outcome::Pass; }
};

// --- Single-identity probes -------------------------------------------------
//
// One draw of each identity, exposed so Monte Carlo estimators and the main
// loops share the same code path.

// One pairing draw at a given x: checks P(x) + P(2^n - x) == b * 2^n,
// degenerating to P(0) == 0 when x == 0 (the pair partner 2^n is outside the
// domain, and a correct program pins P(0) = b*0 = 0).  2 queries (1 at x=0).
Verdict pairing_check(const Int& x, const LinearSpec& spec, const ScalarOracle& oracle);

// One split draw at x: splits x and checks
// P(x1) + P(x2) == b * delta * 2^n + P(x).  3 queries.
Verdict split_check_once(const Int& x, const LinearSpec& spec,
                         const ScalarOracle& oracle, BitStream& bits);

// Vector counterparts.  The pairing draw requires every coordinate of x to
// be nonzero (the caller resamples); the identity is
// P(x) + P(xbar) == (sum_i b_i) * 2^n with xbar_i = 2^n - x_i.
Verdict pairing_check(const std::vector<Int>& x, const LinearSpec& spec,
                      const VectorOracle& oracle);
Verdict split_check_once(const std::vector<Int>& x, const LinearSpec& spec,
                         const VectorOracle& oracle, BitStream& bits);

// --- The testers ------------------------------------------------------------

// Random-split check at a fixed input x (the self-correcting step): one
// split_check_once draw.
Verdict rand_split_check(const Int& x, const LinearSpec& spec,
                         const ScalarOracle& oracle, BitStream& bits);
Verdict rand_split_check(const std::vector<Int>& x, const LinearSpec& spec,
                         const VectorOracle& oracle, BitStream& bits);

// Two-phase randomized self-test of P against f(x) = b*x.  Stops at the
// first violated identity.  Query count is at most
// 2*pairing_rounds + 3*split_rounds (one less per pairing draw that lands
// on x = 0).
Verdict self_test(const LinearSpec& spec, const ScalarOracle& oracle,
                  const Budget& budget, BitStream& bits);

// Self-test for an unknown linear function: first checks 2^n | P(2^n)
// (requires domain extension), then learns b = P(2^n) / 2^n and runs the
// two-phase test against it.  Exactly 1 + 2*pairing_rounds + 3*split_rounds
// queries when every identity holds.
struct GeneralLinearResult {
    Verdict verdict;
    std::optional<Int> learned_coefficient;
};
GeneralLinearResult general_linear_test(const ScalarOracle& oracle,
                                        const DomainParams& domain,
                                        const Budget& budget, BitStream& bits);

// Two-phase self-test of a claimed linear map on D_n^m.  Pairing draws
// resample until every coordinate is nonzero (redraws consume bits, not
// queries; the resample count is surfaced for reporting); split draws use
// the coordinate-wise split.  Always exactly 2*pairing_rounds +
// 3*split_rounds queries on a passing run.
struct HomTestResult {
    Verdict verdict;
    std::uint64_t pairing_resamples = 0;
};
HomTestResult hom_self_test(const LinearSpec& spec, const VectorOracle& oracle,
                            const Budget& budget, BitStream& bits);

// Checker for one claimed value: self-test first, then a final random-split
// check at the input a itself.  At most 2*pairing_rounds + 3*split_rounds + 3
// queries.
Verdict check_input(const Int& a, const LinearSpec& spec,
                    const ScalarOracle& oracle, const Budget& budget,
                    BitStream& bits);

}  // namespace lintest
