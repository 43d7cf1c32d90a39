#include <doctest.h>

#include "lintest/analysis.hpp"
#include "lintest/errors.hpp"
#include "lintest/testers.hpp"

using namespace lintest;

TEST_CASE("standard budget at epsilon 1/8") {
    auto d = budget_for(Rational(1, 8));
    CHECK(d.budget.pairing_rounds == 96);
    CHECK(d.budget.split_rounds == 709);
    CHECK(d.budget.epsilon == Rational(1, 8));
    CHECK(d.beta == Rational(1, 32));
    CHECK(d.alpha == Rational(2, 3));
    CHECK(d.pairing_detect_p == Rational(1, 16));
    CHECK(d.split_detect_p == Rational(13, 1536));
    CHECK(d.target_confidence == Rational(3, 4));

    // Both phases carry at least 6 expected detections against a function
    // that is epsilon-far; that is what the Chernoff certificate needs.
    CHECK(Rational(d.budget.pairing_rounds) * d.pairing_detect_p >= 6);
    CHECK(Rational(d.budget.split_rounds) * d.split_detect_p >= 6);
}

TEST_CASE("budget arithmetic at a second operating point") {
    // epsilon = 1/4: beta = 1/16, pairing p = 1/8 -> 48 rounds;
    // split p = (1/3)(1/8 - 1/16 - (3/2)(1/8)^2) = 5/384 -> ceil(2304/5) = 461.
    auto d = budget_for(Rational(1, 4));
    CHECK(d.budget.pairing_rounds == 48);
    CHECK(d.pairing_detect_p == Rational(1, 8));
    CHECK(d.split_detect_p == Rational(5, 384));
    CHECK(d.budget.split_rounds == 461);
}

TEST_CASE("budget_for rejects out-of-range parameters") {
    CHECK_THROWS_AS(budget_for(Rational(2, 3)), InvalidBudget);
    CHECK_THROWS_AS(budget_for(Rational(0)), InvalidBudget);
    CHECK_THROWS_AS(budget_for(Rational(-1, 8)), InvalidBudget);
    CHECK_THROWS_AS(budget_for(Rational(1, 8), Rational(1, 16), Rational(2, 3)),
                    InvalidBudget);  // beta == epsilon/2
    CHECK_THROWS_AS(budget_for(Rational(1, 8), Rational(0), Rational(2, 3)), InvalidBudget);
    CHECK_THROWS_AS(budget_for(Rational(1, 8), Rational(1, 32), Rational(1)), InvalidBudget);
    CHECK_THROWS_AS(budget_for(Rational(1, 8), Rational(1, 32), Rational(0)), InvalidBudget);
    // alpha so small the opposite-sign term eats the whole split margin
    CHECK_THROWS_AS(budget_for(Rational(1, 2), Rational(1, 8), Rational(1, 8)), InvalidBudget);
}

TEST_CASE("chernoff_trials: frozen counts and the certificate they carry") {
    CHECK(chernoff_trials(Rational(1, 16), Rational(1, 8)) == 96);
    CHECK(chernoff_trials(Rational(13, 1536), Rational(1, 8)) == 709);
    CHECK(chernoff_trials(Rational(1, 100), Rational(1, 8)) == 600);
    CHECK(chernoff_trials(Rational(1), Rational(1, 8)) == 6);

    auto cert = chernoff_certificate(Rational(1, 100), 600);
    CHECK(cert.trials == 600);
    CHECK(cert.failure_bound <= 0.125 + 1e-9);
    CHECK(cert.failure_bound > 0.1);  // the bound is tight, not vacuous

    // Below one expected detection the multiplicative bound says nothing.
    CHECK(chernoff_certificate(Rational(1, 100), 100).failure_bound == 1.0);
}

TEST_CASE("chernoff_trials at a non-standard target is minimal and certified") {
    Rational p(1, 10), target(1, 100);
    auto trials = chernoff_trials(p, target);
    CHECK(chernoff_certificate(p, trials).failure_bound <= 0.01 + 1e-9);
    // One fewer trial must not satisfy the certificate: the count is minimal.
    CHECK(chernoff_certificate(p, trials - 1).failure_bound > 0.01 + 1e-9);
}

TEST_CASE("chernoff_trials validates its inputs") {
    CHECK_THROWS_AS(chernoff_trials(Rational(0), Rational(1, 8)), InvalidProbability);
    CHECK_THROWS_AS(chernoff_trials(Rational(-1, 2), Rational(1, 8)), InvalidProbability);
    CHECK_THROWS_AS(chernoff_trials(Rational(3, 2), Rational(1, 8)), InvalidProbability);
    CHECK_THROWS_AS(chernoff_trials(Rational(1, 2), Rational(0)), InvalidProbability);
    CHECK_THROWS_AS(chernoff_trials(Rational(1, 2), Rational(1)), InvalidProbability);
}

TEST_CASE("testers validate budgets before touching the oracle") {
    LinearSpec spec(Int(3), DomainParams(8));
    LinearScalarOracle oracle(spec);
    BitStream bits(1);

    Budget zero_rounds{0, 709, Rational(1, 8)};
    CHECK_THROWS_AS(self_test(spec, oracle, zero_rounds, bits), InvalidBudget);
    Budget bad_eps{96, 709, Rational(3, 4)};
    CHECK_THROWS_AS(self_test(spec, oracle, bad_eps, bits), InvalidBudget);
    CHECK(oracle.query_count() == 0);
}
