#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lintest/bitperm.hpp"
#include "lintest/domain.hpp"
#include "lintest/ints.hpp"
#include "lintest/oracle.hpp"

namespace lintest {

// The simulated-fault zoo.  Every adversary wraps the correct linear program
// and adds a structured discrepancy d(x) = P(x) - f(x); each kind targets a
// different blind spot of the testers.
enum class FaultKind {
    Correct,             // d = 0 everywhere (soundness baseline)
    RandomAdditive,      // d = +/-magnitude on an exact pseudorandom fraction
    SignBalancedPaired,  // +magnitude at x, -magnitude at 2^n - x: invisible
                         // to the pairing identity by construction
    ConstantOffset,      // d = magnitude everywhere (P = f + c)
    AffineMultipleOf2n,  // d = magnitude * 2^n everywhere: survives the
                         // divisibility probe, caught by pairing
    SinglePoint,         // d = magnitude at one chosen site
    ParityOffset,        // d = magnitude * 2^n when the coordinate sum is
                         // odd: divisibility-check blind, split-check visible
};

const char* fault_kind_name(FaultKind k);
std::optional<FaultKind> fault_kind_from_string(const std::string& name);

inline constexpr std::uint64_t kDefaultSiteSeed = 0x5eedf00dULL;

// Declarative description of a fault.  `fraction` is the target corrupted
// fraction epsilon0 for the kinds that take one; it must be exactly
// realizable on the domain (fraction * 2^n an integer) or materialization
// throws UnrealizableFraction.  site_seed keys the pseudorandom site
// selection, so a spec materializes to the same program every time.
struct FaultSpec {
    FaultKind kind = FaultKind::Correct;
    Rational fraction = 0;
    Int magnitude = 1;
    std::vector<Int> site;  // SinglePoint: the site (m coordinates; 1 for scalar)
    std::uint64_t site_seed = kDefaultSiteSeed;

    // Explicit fault table (scalar RandomAdditive only): corrupt exactly
    // these sites by these offsets instead of pseudorandom selection.
    std::vector<Int> explicit_sites;
    std::vector<Int> explicit_offsets;
};

// Exact corruption accounting, computed at materialization time from the
// construction itself (not by scanning): epsilon0 = epsilon1 + epsilon2
// always holds, where epsilon1/epsilon2 are the fractions with positive/
// negative discrepancy.  The analysis engine re-derives these by enumeration
// on small domains; tests pin the two routes against each other.
struct MaterializedStats {
    Rational epsilon0 = 0;
    Rational epsilon1 = 0;
    Rational epsilon2 = 0;
    Int fault_count = 0;
    Int domain_size = 0;
};

class ScalarAdversary final : public ScalarOracle {
public:
    ScalarAdversary(FaultSpec fault, LinearSpec spec);

    const MaterializedStats& stats() const { return stats_; }
    const FaultSpec& fault() const { return fault_; }
    const LinearSpec& spec() const { return spec_; }

    // The planted discrepancy at x (x in D_n or x == 2^n); not an oracle
    // query.  Exposed for the exact analysis engine and tests.
    Int discrepancy_at(const Int& x) const;

private:
    Int value_at(const Int& x) const override;
    Int rule_discrepancy(const Int& x) const;

    FaultSpec fault_;
    LinearSpec spec_;
    MaterializedStats stats_;
    Int pos_cut_ = 0;     // RandomAdditive: ranks below this get +magnitude
    Int pair_count_ = 0;  // SignBalancedPaired: number of (+,-) pairs
    std::optional<BitPermutation> perm_;
    std::vector<std::pair<Int, Int>> explicit_sorted_;  // (site, offset)
    std::vector<Int> table_;  // dense d-table for small n (index 0..2^n)
    bool use_table_ = false;
};

class VectorAdversary final : public VectorOracle {
public:
    VectorAdversary(FaultSpec fault, LinearSpec spec);

    const MaterializedStats& stats() const { return stats_; }
    const FaultSpec& fault() const { return fault_; }
    const LinearSpec& spec() const { return spec_; }

    Int discrepancy_at(const std::vector<Int>& x) const;

private:
    Int value_at(const std::vector<Int>& x) const override;
    Int rule_discrepancy(const Int& flattened) const;
    Int flatten(const std::vector<Int>& x) const;

    FaultSpec fault_;
    LinearSpec spec_;
    MaterializedStats stats_;
    Int pos_cut_ = 0;
    std::optional<BitPermutation> perm_;
    Int site_flat_ = -1;  // SinglePoint: flattened site
    std::vector<Int> table_;
    bool use_table_ = false;
};

// Build the simulated faulty program for a spec.  Scalar adversaries answer
// the extension point 2^n as well (with the discrepancy their rule assigns
// there), so every zoo member works under general_linear_test.
std::unique_ptr<ScalarAdversary> materialize(const FaultSpec& fault, const LinearSpec& spec);
std::unique_ptr<VectorAdversary> materialize_vector(const FaultSpec& fault, const LinearSpec& spec);

// Parse the CLI fault grammar:
//   correct
//   random-additive:FRACTION:MAGNITUDE
//   sign-balanced:FRACTION:MAGNITUDE
//   constant-offset:MAGNITUDE
//   affine-2n:MAGNITUDE
//   single-point:SITE[,SITE...]:MAGNITUDE
//   parity-offset:MAGNITUDE
// FRACTION accepts p/q, integers, or finite decimals.
FaultSpec parse_fault_spec(const std::string& text);
std::string format_fault_spec(const FaultSpec& fault);

}  // namespace lintest
