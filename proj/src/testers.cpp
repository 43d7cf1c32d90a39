#include "lintest/testers.hpp"

#include <stdexcept>
#include <string>

#include "lintest/analysis.hpp"
#include "lintest/errors.hpp"

namespace lintest {

namespace {

void validate_budget(const Budget& budget) {
    if (budget.pairing_rounds == 0 || budget.split_rounds == 0)
        throw InvalidBudget("iteration counts must be positive");
    if (budget.epsilon <= 0 || budget.epsilon >= Rational(2, 3))
        throw InvalidBudget("epsilon must lie in (0, 2/3); got " +
                            format_rational(budget.epsilon));
}

Verdict fail_at(FailureSite site, std::vector<WitnessEntry> witness,
                std::uint64_t queries) {
    Verdict v;
    v.outcome = Outcome::Fail;
    v.failure_site = site;
    v.witness = std::move(witness);
    v.queries_used = queries;
    return v;
}

Verdict pass_with(std::uint64_t queries) {
    Verdict v;
    v.queries_used = queries;
    return v;
}

// Maximum pairing redraws before giving up on finding an all-nonzero vector.
// Hitting this for any sane domain means the bit source is broken.
constexpr std::uint64_t kMaxPairingResamples = 100000;

}  // namespace

const char* to_string(Outcome o) {
    return o == Outcome::Pass ? "PASS" : "FAIL";
}

const char* to_string(FailureSite s) {
    switch (s) {
        case FailureSite::None: return "none";
        case FailureSite::PairingLoop: return "pairing-loop";
        case FailureSite::SplitLoop: return "split-loop";
        case FailureSite::DivisibilityCheck: return "divisibility-check";
        case FailureSite::FinalSplit: return "final-split";
    }
    return "unknown";
}

std::optional<FailureSite> failure_site_from_string(const std::string& name) {
    for (FailureSite s : {FailureSite::None, FailureSite::PairingLoop,
                          FailureSite::SplitLoop, FailureSite::DivisibilityCheck,
                          FailureSite::FinalSplit})
        if (name == to_string(s)) return s;
    return std::nullopt;
}

// --- scalar probes -----------------------------------------------------------

Verdict pairing_check(const Int& x, const LinearSpec& spec, const ScalarOracle& oracle) {
    if (x == 0) {
        // The pair partner of 0 would be 2^n, outside the domain; the
        // degenerate identity is P(0) == 0, which any linear function pins.
        Int p0 = oracle.query(x);
        if (p0 != 0)
            return fail_at(FailureSite::PairingLoop, {{{x}, p0}}, 1);
        return pass_with(1);
    }
    Int partner = pow2(spec.bits()) - x;
    Int px = oracle.query(x);
    Int ppartner = oracle.query(partner);
    if (px + ppartner != shift_mul_pow2(spec.coefficient(), spec.bits()))
        return fail_at(FailureSite::PairingLoop, {{{x}, px}, {{partner}, ppartner}}, 2);
    return pass_with(2);
}

Verdict split_check_once(const Int& x, const LinearSpec& spec,
                         const ScalarOracle& oracle, BitStream& bits) {
    SplitOutcome split = split_random(x, spec.domain(), bits);
    Int p1 = oracle.query(split.x1);
    Int p2 = oracle.query(split.x2);
    Int px = oracle.query(x);
    Int rhs = px;
    if (split.delta != 0) rhs += shift_mul_pow2(spec.coefficient(), spec.bits());
    if (p1 + p2 != rhs)
        return fail_at(FailureSite::SplitLoop,
                       {{{split.x1}, p1}, {{split.x2}, p2}, {{x}, px}}, 3);
    return pass_with(3);
}

// --- vector probes -----------------------------------------------------------

Verdict pairing_check(const std::vector<Int>& x, const LinearSpec& spec,
                      const VectorOracle& oracle) {
    if (x.size() != spec.dimension())
        throw DimensionMismatch("pairing point has dimension " + std::to_string(x.size()) +
                                ", spec wants " + std::to_string(spec.dimension()));
    Int coordinate_size = pow2(spec.bits());
    std::vector<Int> partner;
    partner.reserve(x.size());
    for (const Int& xi : x) {
        if (xi == 0)
            throw std::invalid_argument("pairing point must have all coordinates nonzero");
        partner.push_back(coordinate_size - xi);
    }
    Int px = oracle.query(x);
    Int ppartner = oracle.query(partner);
    if (px + ppartner != shift_mul_pow2(spec.coefficient_sum(), spec.bits()))
        return fail_at(FailureSite::PairingLoop, {{x, px}, {partner, ppartner}}, 2);
    return pass_with(2);
}

Verdict split_check_once(const std::vector<Int>& x, const LinearSpec& spec,
                         const VectorOracle& oracle, BitStream& bits) {
    VectorSplitOutcome split = split_random(x, spec.vector_domain(), bits);
    Int p1 = oracle.query(split.y);
    Int p2 = oracle.query(split.z);
    Int px = oracle.query(x);
    Int rhs = px;
    for (std::size_t i = 0; i < split.deltas.size(); ++i)
        if (split.deltas[i] != 0)
            rhs += shift_mul_pow2(spec.coefficients()[i], spec.bits());
    if (p1 + p2 != rhs)
        return fail_at(FailureSite::SplitLoop,
                       {{split.y, p1}, {split.z, p2}, {x, px}}, 3);
    return pass_with(3);
}

// --- testers -------------------------------------------------------------------

Verdict rand_split_check(const Int& x, const LinearSpec& spec,
                         const ScalarOracle& oracle, BitStream& bits) {
    if (!spec.domain().contains(x))
        throw std::invalid_argument("rand_split_check input outside domain");
    return split_check_once(x, spec, oracle, bits);
}

Verdict rand_split_check(const std::vector<Int>& x, const LinearSpec& spec,
                         const VectorOracle& oracle, BitStream& bits) {
    if (x.size() != spec.dimension())
        throw DimensionMismatch("input has dimension " + std::to_string(x.size()) +
                                ", spec wants " + std::to_string(spec.dimension()));
    if (!spec.vector_domain().contains(x))
        throw std::invalid_argument("rand_split_check input outside domain");
    return split_check_once(x, spec, oracle, bits);
}

Verdict self_test(const LinearSpec& spec, const ScalarOracle& oracle,
                  const Budget& budget, BitStream& bits) {
    validate_budget(budget);
    if (spec.is_vector())
        throw std::invalid_argument("self_test needs a scalar spec");
    if (spec.bits() != oracle.domain().bits())
        throw std::invalid_argument("spec and oracle domains differ");
    DomainParams domain = spec.domain();
    std::uint64_t queries = 0;

    for (std::uint32_t i = 0; i < budget.pairing_rounds; ++i) {
        Int x = sample_uniform(domain, bits);
        Verdict v = pairing_check(x, spec, oracle);
        queries += v.queries_used;
        if (!v.passed()) {
            v.queries_used = queries;
            return v;
        }
    }
    for (std::uint32_t i = 0; i < budget.split_rounds; ++i) {
        Int x = sample_uniform(domain, bits);
        Verdict v = split_check_once(x, spec, oracle, bits);
        queries += v.queries_used;
        if (!v.passed()) {
            v.queries_used = queries;
            return v;
        }
    }
    return pass_with(queries);
}

GeneralLinearResult general_linear_test(const ScalarOracle& oracle,
                                        const DomainParams& domain,
                                        const Budget& budget, BitStream& bits) {
    validate_budget(budget);
    if (domain.bits() != oracle.domain().bits())
        throw std::invalid_argument("spec and oracle domains differ");
    if (!oracle.supports_domain_extension())
        throw OracleError("general linear test needs the program to accept 2^n");

    GeneralLinearResult result;
    Int boundary = pow2(domain.bits());
    Int at_boundary = oracle.query(boundary);
    std::uint64_t queries = 1;

    if (at_boundary % boundary != 0) {
        // No linear function can produce this: b * 2^n is always a multiple
        // of 2^n.  The single query is its own refutation.
        result.verdict = fail_at(FailureSite::DivisibilityCheck,
                                 {{{boundary}, at_boundary}}, queries);
        return result;
    }
    Int learned = at_boundary / boundary;
    result.learned_coefficient = learned;
    LinearSpec spec(learned, domain);

    Verdict inner = self_test(spec, oracle, budget, bits);
    queries += inner.queries_used;
    inner.queries_used = queries;
    if (!inner.passed()) {
        // The refuted identity is stated against P(2^n) itself: pairing
        // compares to it outright, and a wrapping split adds it to the
        // right-hand side.  Include that query except where the identity
        // never referenced it (the P(0) == 0 case and non-wrapping splits).
        bool references_boundary = false;
        if (inner.failure_site == FailureSite::PairingLoop)
            references_boundary = inner.witness.size() == 2;
        else if (inner.failure_site == FailureSite::SplitLoop)
            references_boundary =
                inner.witness[0].point[0] + inner.witness[1].point[0] != inner.witness[2].point[0];
        if (references_boundary)
            inner.witness.insert(inner.witness.begin(), {{boundary}, at_boundary});
    }
    result.verdict = std::move(inner);
    return result;
}

HomTestResult hom_self_test(const LinearSpec& spec, const VectorOracle& oracle,
                            const Budget& budget, BitStream& bits) {
    validate_budget(budget);
    if (spec.bits() != oracle.domain().bits() ||
        spec.dimension() != oracle.domain().dimension())
        throw DimensionMismatch("spec and oracle domains differ");
    VectorDomainParams domain = spec.vector_domain();

    HomTestResult result;
    std::uint64_t queries = 0;

    for (std::uint32_t i = 0; i < budget.pairing_rounds; ++i) {
        // The pairing partner flips each coordinate to 2^n - x_i, which only
        // stays inside the domain when x_i != 0; redraw until it does.  Each
        // redraw is uniform, so this conditions on the all-nonzero event
        // (probability (1 - 2^-n)^m) without skewing it.
        std::vector<Int> x = sample_uniform(domain, bits);
        std::uint64_t attempts = 0;
        auto has_zero = [](const std::vector<Int>& v) {
            for (const Int& c : v)
                if (c == 0) return true;
            return false;
        };
        while (has_zero(x)) {
            if (++attempts > kMaxPairingResamples)
                throw Error("pairing resample limit exceeded; bit source looks broken");
            x = sample_uniform(domain, bits);
        }
        result.pairing_resamples += attempts;
        Verdict v = pairing_check(x, spec, oracle);
        queries += v.queries_used;
        if (!v.passed()) {
            v.queries_used = queries;
            result.verdict = std::move(v);
            return result;
        }
    }
    for (std::uint32_t i = 0; i < budget.split_rounds; ++i) {
        std::vector<Int> x = sample_uniform(domain, bits);
        Verdict v = split_check_once(x, spec, oracle, bits);
        queries += v.queries_used;
        if (!v.passed()) {
            v.queries_used = queries;
            result.verdict = std::move(v);
            return result;
        }
    }
    result.verdict = pass_with(queries);
    return result;
}

Verdict check_input(const Int& a, const LinearSpec& spec,
                    const ScalarOracle& oracle, const Budget& budget,
                    BitStream& bits) {
    if (!spec.domain().contains(a))
        throw std::invalid_argument("checked input outside domain");
    Verdict overall = self_test(spec, oracle, budget, bits);
    if (!overall.passed()) return overall;

    Verdict final_split = split_check_once(a, spec, oracle, bits);
    final_split.queries_used += overall.queries_used;
    if (!final_split.passed()) {
        final_split.failure_site = FailureSite::FinalSplit;
        return final_split;
    }
    return pass_with(final_split.queries_used);
}

// --- budgets ---------------------------------------------------------------------

BudgetDerivation budget_for(const Rational& epsilon, const Rational& beta,
                            const Rational& alpha) {
    if (epsilon <= 0 || epsilon >= Rational(2, 3))
        throw InvalidBudget("epsilon must lie in (0, 2/3); got " + format_rational(epsilon));
    if (beta <= 0 || beta >= epsilon / 2)
        throw InvalidBudget("beta must lie in (0, epsilon/2)");
    if (alpha <= 0 || alpha >= 1)
        throw InvalidBudget("alpha must lie in (0, 1)");

    // One pairing round catches an imbalance of positive versus negative
    // discrepancies; below balance beta the split phase takes over, and its
    // per-round detection is what remains of epsilon/2 after paying for the
    // balance slack and for splits that land on two faults of opposite sign.
    Rational half = epsilon / 2;
    Rational pairing_p = 2 * beta;
    Rational split_p = (1 - alpha) * (half - beta - half * half / alpha);
    if (split_p <= 0)
        throw InvalidBudget("beta/alpha leave no split-detection margin at epsilon " +
                            format_rational(epsilon));

    Rational target_failure(1, 8);
    BudgetDerivation d;
    d.budget.pairing_rounds = static_cast<std::uint32_t>(chernoff_trials(pairing_p, target_failure));
    d.budget.split_rounds = static_cast<std::uint32_t>(chernoff_trials(split_p, target_failure));
    d.budget.epsilon = epsilon;
    d.beta = beta;
    d.alpha = alpha;
    d.pairing_detect_p = pairing_p;
    d.split_detect_p = split_p;
    d.target_confidence = Rational(3, 4);  // both phases at 7/8
    return d;
}

BudgetDerivation budget_for(const Rational& epsilon) {
    return budget_for(epsilon, epsilon / 4, Rational(2, 3));
}

}  // namespace lintest
