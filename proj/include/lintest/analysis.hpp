#pragma once

#include <cstdint>
#include <vector>

#include "lintest/domain.hpp"
#include "lintest/ints.hpp"
#include "lintest/oracle.hpp"
#include "lintest/random.hpp"
#include "lintest/testers.hpp"

namespace lintest {

// Enumeration ceilings for the exact engine.  Single-point scans cost 2^n
// oracle queries; pairwise statistics (per-x split probabilities over all x,
// opposite-sign totals) cost 4^n operations, so they get a lower ceiling.
// Environment overrides: LINTEST_SCAN_BITS, LINTEST_PAIR_SCAN_BITS,
// LINTEST_VECTOR_SCAN_BITS.
struct ScanLimits {
    unsigned single_scan_bits = 20;
    unsigned pair_scan_bits = 14;
    unsigned vector_scan_bits = 16;  // applies to n*m

    static ScanLimits defaults();
};

// Sign census of the discrepancy d(x) = P(x) - f(x) over the whole domain.
// epsilon0/1/2 are the exact fractions with d nonzero / positive / negative;
// epsilon0 == epsilon1 + epsilon2 by construction.
struct DiscrepancyProfile {
    unsigned bits = 0;        // log2 of the domain size scanned
    Int num_zero = 0;
    Int num_positive = 0;
    Int num_negative = 0;
    Rational epsilon0 = 0;
    Rational epsilon1 = 0;
    Rational epsilon2 = 0;
};

// For a fixed x: in how many ways can a split x = x1 + x2 (mod 2^n) land on
// discrepancies of opposite sign (d(x1) > 0 and d(x2) < 0)?  Split points
// where that count is small are "good": a split at a good x detects a
// corrupted program with probability bounded away from zero.
struct OppositeSignReport {
    Int x = 0;
    Int match_count = 0;
    Rational alpha = 0;
    Rational threshold = 0;  // (1/alpha) * (epsilon0/2)^2 * 2^n
    bool is_good = false;    // match_count <= threshold
};

// chernoff_trials' certificate: running `trials` independent draws that each
// detect with probability >= p sees at least one detection except with
// probability <= failure_bound (<= the requested bound, slack 1e-9).
struct ChernoffQuery {
    Rational p = 0;
    std::uint64_t trials = 0;
    double failure_bound = 1.0;
};

// Closest linear function to P: the coefficient b minimizing
// Pr_x[P(x) != b*x], found by majority vote over candidate coefficients
// P(x)/x (ties broken toward the smallest candidate).
struct NearestLinear {
    Int coefficient = 0;
    Int agreement_count = 0;
    Rational distance = 0;  // fraction of the domain where P differs
};

// d(x) = P(x) - f(x); one oracle query.
Int discrepancy(const Int& x, const LinearSpec& spec, const ScalarOracle& oracle);
Int discrepancy(const std::vector<Int>& x, const LinearSpec& spec, const VectorOracle& oracle);

// --- Exhaustive scan over a scalar domain ------------------------------------
//
// Queries every point once up front, then answers exact questions in rational
// arithmetic.  An int64 fast path covers the common case of small
// discrepancies; everything falls back to arbitrary precision transparently.
class DiscrepancyScan {
public:
    DiscrepancyScan(const LinearSpec& spec, const ScalarOracle& oracle,
                    ScanLimits limits = ScanLimits::defaults());

    const DiscrepancyProfile& profile() const { return profile_; }
    unsigned bits() const { return bits_; }

    Int discrepancy_at(const Int& x) const;

    // Exact failure probability of one pairing draw with x uniform:
    // d(x) + d(2^n - x) != 0, with the x = 0 draw testing d(0) != 0.
    Rational pairing_fail_prob() const;

    // Exact failure probability of one split draw at fixed x:
    // d(x1) + d(x2) != d(x) over the 2^n equally likely splits.
    Rational split_fail_prob(const Int& x) const;

    // Average of split_fail_prob over x uniform (4^n work; gated by
    // pair_scan_bits).
    Rational split_fail_prob_overall() const;

    OppositeSignReport opposite_sign_report(const Int& x, const Rational& alpha) const;

    // Sum of opposite-sign match counts over all x.  Equals
    // num_positive * num_negative exactly (each (x1, x2) pair is counted at
    // the unique x it splits), which is the identity behind the expected-
    // match bound; computed here by direct double enumeration as an
    // independent route.
    Int opposite_sign_match_total() const;

    // Number of x whose match count exceeds the goodness threshold.
    Int bad_point_count(const Rational& alpha) const;

private:
    unsigned bits_;
    std::size_t domain_size_;
    DiscrepancyProfile profile_;
    ScanLimits limits_;
    std::vector<Int> d_;
    std::vector<long long> d64_;    // mirror of d_ when every value fits
    std::vector<signed char> sign_;
    bool fits64_ = false;

    std::size_t match_count_at(std::size_t x) const;
    void require_pairwise(const char* op) const;
};

// Vector-domain scan over D_n^m (2^(n*m) points, flattened little-endian by
// coordinate).  Pairing statistics condition on every coordinate nonzero,
// matching the resampling tester.
class VectorDiscrepancyScan {
public:
    VectorDiscrepancyScan(const LinearSpec& spec, const VectorOracle& oracle,
                          ScanLimits limits = ScanLimits::defaults());

    const DiscrepancyProfile& profile() const { return profile_; }
    unsigned bits() const { return bits_; }  // n*m

    Int discrepancy_at(const std::vector<Int>& x) const;
    Rational pairing_fail_prob() const;
    Rational split_fail_prob(const std::vector<Int>& x) const;

private:
    unsigned coord_bits_;
    unsigned dimension_;
    unsigned bits_;
    std::size_t domain_size_;
    DiscrepancyProfile profile_;
    std::vector<Int> d_;
    std::vector<long long> d64_;
    bool fits64_ = false;

    std::size_t flatten_mask_() const { return (std::size_t(1) << coord_bits_) - 1; }
};

// Free-function conveniences over one-shot scans.
DiscrepancyProfile profile(const LinearSpec& spec, const ScalarOracle& oracle,
                           ScanLimits limits = ScanLimits::defaults());
OppositeSignReport opposite_sign_report(const Int& x, const Rational& alpha,
                                        const LinearSpec& spec, const ScalarOracle& oracle,
                                        ScanLimits limits = ScanLimits::defaults());
Rational exact_pairing_fail_prob(const LinearSpec& spec, const ScalarOracle& oracle,
                                 ScanLimits limits = ScanLimits::defaults());
Rational exact_split_fail_prob(const Int& x, const LinearSpec& spec,
                               const ScalarOracle& oracle,
                               ScanLimits limits = ScanLimits::defaults());

// Fewest independent trials with per-trial success probability >= p whose
// failure probability is certified <= target_failure by the multiplicative
// Chernoff bound.  Returns ceil(6/p) for target 1/8 after validating the
// certificate numerically; InvalidProbability unless 0 < p <= 1.
std::uint64_t chernoff_trials(const Rational& p, const Rational& target_failure);
ChernoffQuery chernoff_certificate(const Rational& p, std::uint64_t trials);

NearestLinear nearest_linear(const ScalarOracle& oracle,
                             ScanLimits limits = ScanLimits::defaults());

// --- Monte Carlo estimators ---------------------------------------------------
//
// Sample the same per-draw probes the testers run; used to cross-validate the
// exact engine (and usable on domains too large to scan).
Rational mc_pairing_fail_rate(const LinearSpec& spec, const ScalarOracle& oracle,
                              std::uint64_t samples, BitStream& bits);
Rational mc_split_fail_rate(const LinearSpec& spec, const ScalarOracle& oracle,
                            std::uint64_t samples, BitStream& bits);
Rational mc_split_fail_rate_at(const Int& x, const LinearSpec& spec,
                               const ScalarOracle& oracle,
                               std::uint64_t samples, BitStream& bits);

}  // namespace lintest
