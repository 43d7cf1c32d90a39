#pragma once

// Shared test helpers: replaying a failure witness against the program it
// came from.  A witness is only worth anything if (a) re-querying the same
// points reproduces the same answers and (b) those answers really do violate
// the identity the verdict names.  Both are checked from scratch here, not
// by calling back into the tester.

#include <vector>

#include "lintest/adversaries.hpp"
#include "lintest/domain.hpp"
#include "lintest/ints.hpp"
#include "lintest/oracle.hpp"
#include "lintest/testers.hpp"

namespace lintest_test {

using namespace lintest;

// Re-query every witness point and confirm the stored answers.
inline bool witness_answers_reproduce(const Verdict& v, const ScalarOracle& oracle) {
    for (const WitnessEntry& e : v.witness) {
        if (e.point.size() != 1) return false;
        if (oracle.query(e.point[0]) != e.answer) return false;
    }
    return true;
}

inline bool witness_answers_reproduce(const Verdict& v, const VectorOracle& oracle) {
    for (const WitnessEntry& e : v.witness)
        if (oracle.query(e.point) != e.answer) return false;
    return true;
}

// Check that the witness, taken at face value, violates the identity the
// failure site names.  `spec` must carry the coefficient the tester was
// checking against (for general_linear_test, the learned one).
inline bool witness_violates_identity(const Verdict& v, const LinearSpec& spec) {
    if (v.outcome != Outcome::Fail) return false;
    const auto& w = v.witness;
    const Int full = pow2(spec.bits());
    const Int scaled = shift_mul_pow2(spec.coefficient(), spec.bits());

    switch (v.failure_site) {
        case FailureSite::PairingLoop:
            if (w.size() == 1)  // degenerate draw at x = 0
                return w[0].point[0] == 0 && w[0].answer != 0;
            if (w.size() == 2)
                return w[0].point[0] + w[1].point[0] == full &&
                       w[0].answer + w[1].answer != scaled;
            if (w.size() == 3)  // boundary query included: compare against it
                return w[0].point[0] == full &&
                       w[1].point[0] + w[2].point[0] == full &&
                       w[1].answer + w[2].answer != w[0].answer;
            return false;

        case FailureSite::SplitLoop:
        case FailureSite::FinalSplit: {
            if (w.size() == 3) {
                const Int sum = w[0].point[0] + w[1].point[0];
                Int rhs = w[2].answer;
                if (sum == w[2].point[0] + full) rhs += scaled;
                else if (sum != w[2].point[0]) return false;
                return w[0].answer + w[1].answer != rhs;
            }
            if (w.size() == 4)  // wrapped split stated against the boundary answer
                return w[0].point[0] == full &&
                       w[1].point[0] + w[2].point[0] == w[3].point[0] + full &&
                       w[1].answer + w[2].answer != w[0].answer + w[3].answer;
            return false;
        }

        case FailureSite::DivisibilityCheck:
            return w.size() == 1 && w[0].point[0] == full && w[0].answer % full != 0;

        default:
            return false;
    }
}

// Vector counterpart: pairing partners flip every coordinate, splits wrap
// coordinate-wise.
inline bool witness_violates_identity_vector(const Verdict& v, const LinearSpec& spec) {
    if (v.outcome != Outcome::Fail) return false;
    const auto& w = v.witness;
    const Int full = pow2(spec.bits());
    const unsigned m = spec.dimension();

    switch (v.failure_site) {
        case FailureSite::PairingLoop: {
            if (w.size() != 2) return false;
            for (unsigned i = 0; i < m; ++i)
                if (w[0].point[i] + w[1].point[i] != full) return false;
            return w[0].answer + w[1].answer !=
                   shift_mul_pow2(spec.coefficient_sum(), spec.bits());
        }
        case FailureSite::SplitLoop:
        case FailureSite::FinalSplit: {
            if (w.size() != 3) return false;
            Int rhs = w[2].answer;
            for (unsigned i = 0; i < m; ++i) {
                const Int sum = w[0].point[i] + w[1].point[i];
                if (sum == w[2].point[i] + full)
                    rhs += shift_mul_pow2(spec.coefficients()[i], spec.bits());
                else if (sum != w[2].point[i])
                    return false;
            }
            return w[0].answer + w[1].answer != rhs;
        }
        default:
            return false;
    }
}

inline bool witness_replays(const Verdict& v, const LinearSpec& spec,
                            const ScalarOracle& oracle) {
    return witness_answers_reproduce(v, oracle) && witness_violates_identity(v, spec);
}

inline bool witness_replays(const Verdict& v, const LinearSpec& spec,
                            const VectorOracle& oracle) {
    return witness_answers_reproduce(v, oracle) && witness_violates_identity_vector(v, spec);
}

// A small but valid budget for tests that only care about control flow.
inline Budget tiny_budget(std::uint32_t k1 = 4, std::uint32_t k2 = 4) {
    Budget b;
    b.pairing_rounds = k1;
    b.split_rounds = k2;
    b.epsilon = Rational(1, 8);
    return b;
}

}  // namespace lintest_test
