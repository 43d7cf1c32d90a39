// Acceptance gates for the linearity self-testing toolkit.  Each criterion
// prints exactly one [PASS]/[FAIL] line; the exit code is the number of
// failed criteria.  Tolerances are pinned here, in code: rate thresholds are
// >= 750/1000, estimator agreement is within 4 standard errors, counting
// identities and query budgets are exact, and Chernoff certificates get the
// same 1e-9 slack the library itself guarantees.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "lintest/adversaries.hpp"
#include "lintest/analysis.hpp"
#include "lintest/campaign.hpp"
#include "lintest/oracle.hpp"
#include "lintest/testers.hpp"

using namespace lintest;

namespace {

int failures = 0;

void verdict_line(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", id, name,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename Fn>
void criterion(int id, const char* name, Fn&& fn) {
    try {
        std::string detail;
        bool ok = fn(detail);
        verdict_line(id, name, ok, detail);
    } catch (const std::exception& e) {
        verdict_line(id, name, false, std::string("exception: ") + e.what());
    }
}

void note(const std::string& text) { std::printf("       %s\n", text.c_str()); }

std::string rate_text(const CampaignResult& r) {
    char buffer[96];
    std::snprintf(buffer, sizeof buffer, "fail %4" PRIu64 "/%zu  ci95_lower=%.4f",
                  r.fail_count, r.trials.size(), r.fail_rate_ci.lower);
    return buffer;
}

// Zoo sweep used by the exact-engine criteria: every fault family, with the
// tunable densities at 1/8, 1/4, 1/2 where the domain can realize them.
std::vector<std::string> zoo(unsigned n) {
    std::vector<std::string> faults;
    for (const char* f : {"1/8", "1/4", "1/2"})
        faults.push_back(std::string("random-additive:") + f + ":1");
    for (const char* f : {"1/8", "1/4", "1/2"})
        if (n >= 4) faults.push_back(std::string("sign-balanced:") + f + ":1");
    faults.push_back("constant-offset:1");
    faults.push_back("affine-2n:1");
    faults.push_back("single-point:5:9");
    faults.push_back("parity-offset:1");
    return faults;
}

const BudgetDerivation kDerived = budget_for(Rational(1, 8));

bool correct_program_soundness(std::string& detail) {
    const std::uint64_t trials = 1000;
    std::vector<Int> coefficients = {Int(0), Int(1), Int(-5), (Int(1) << 63) + 1};
    std::uint64_t seed = 100, campaigns = 0;
    for (unsigned n : {4u, 16u, 64u}) {
        for (const Int& b : coefficients) {
            LinearSpec spec(b, DomainParams(n));
            LinearScalarOracle program(spec);

            auto expect_clean = [&](const char* tester, const TrialFn& fn) {
                CampaignResult r = run_campaign(trials, seed++, 1, fn);
                ++campaigns;
                if (r.fail_count == 0) return true;
                detail = std::string(tester) + " raised a false alarm at n=" +
                         std::to_string(n) + ", b=" + b.str();
                return false;
            };

            if (!expect_clean("self_test", [&](std::uint64_t, BitStream& bits) {
                    return self_test(spec, program, kDerived.budget, bits);
                }))
                return false;

            bool learned_ok = true;
            if (!expect_clean("general_linear_test", [&](std::uint64_t, BitStream& bits) {
                    GeneralLinearResult r = general_linear_test(
                        program, spec.domain(), kDerived.budget, bits);
                    if (!r.learned_coefficient || *r.learned_coefficient != b)
                        learned_ok = false;
                    return r.verdict;
                }))
                return false;
            if (!learned_ok) {
                detail = "general_linear_test learned a wrong coefficient at n=" +
                         std::to_string(n) + ", b=" + b.str();
                return false;
            }

            if (!expect_clean("check_input", [&](std::uint64_t, BitStream& bits) {
                    return check_input(Int(3), spec, program, kDerived.budget, bits);
                }))
                return false;

            for (unsigned m : {1u, 2u, 3u}) {
                LinearSpec vector_spec(std::vector<Int>(m, b), VectorDomainParams(n, m));
                LinearVectorOracle vector_program(vector_spec);
                if (!expect_clean("hom_self_test", [&](std::uint64_t, BitStream& bits) {
                        return hom_self_test(vector_spec, vector_program,
                                             kDerived.budget, bits).verdict;
                    }))
                    return false;
            }
        }
    }
    detail = std::to_string(campaigns) + " campaigns x 1000 trials, zero false alarms";
    return true;
}

bool self_test_detection(std::string& detail) {
    LinearSpec spec(Int(7), DomainParams(16));
    std::vector<std::string> faults;
    for (const char* f : {"1/8", "1/4", "1/2"}) {
        faults.push_back(std::string("random-additive:") + f + ":1");
        faults.push_back(std::string("sign-balanced:") + f + ":1");
    }
    faults.push_back("constant-offset:1");

    bool ok = true;
    std::uint64_t worst = 1000, seed = 7000;
    for (const std::string& fault : faults) {
        auto program = materialize(parse_fault_spec(fault), spec);
        CampaignResult r = run_campaign(1000, seed++, 1, [&](std::uint64_t, BitStream& bits) {
            return self_test(spec, *program, kDerived.budget, bits);
        });
        note(fault + std::string(28 - std::min<std::size_t>(28, fault.size()), ' ') +
             rate_text(r));
        worst = std::min(worst, r.fail_count);
        if (r.fail_count < 750) ok = false;
    }
    detail = "lowest detection " + std::to_string(worst) + "/1000 (threshold 750)";
    return ok;
}

bool opposite_sign_identity(std::string& detail) {
    std::uint64_t checked = 0;
    for (unsigned n : {4u, 6u, 8u, 10u}) {
        LinearSpec spec(Int(7), DomainParams(n));
        const Int domain = pow2(n);
        for (const std::string& fault : zoo(n)) {
            auto program = materialize(parse_fault_spec(fault), spec);
            DiscrepancyScan scan(spec, *program);
            Int total = scan.opposite_sign_match_total();
            Rational average(total, domain);
            Rational expected =
                scan.profile().epsilon1 * scan.profile().epsilon2 * Rational(domain);
            Rational half = scan.profile().epsilon0 / 2;
            if (total != scan.profile().num_positive * scan.profile().num_negative ||
                average != expected || average > half * half * Rational(domain)) {
                detail = fault + " at n=" + std::to_string(n) +
                         " broke the counting identity";
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " (fault, n) pairs, exact equality";
    return true;
}

bool good_point_floor(std::string& detail) {
    const Rational alpha(2, 3), beta(1, 32), eps0(1, 4);
    const Rational floor_bound = eps0 / 2 - beta - (eps0 / 2) * (eps0 / 2) / alpha;
    if (floor_bound != Rational(9, 128)) {
        detail = "derived floor is " + format_rational(floor_bound) + ", expected 9/128";
        return false;
    }
    LinearSpec spec(Int(5), DomainParams(10));
    auto program = materialize(parse_fault_spec("sign-balanced:1/4:1"), spec);
    DiscrepancyScan scan(spec, *program);
    Int good = 0;
    Rational lowest(1);
    for (unsigned x = 0; x < 1024; ++x) {
        if (!scan.opposite_sign_report(Int(x), alpha).is_good) continue;
        good += 1;
        Rational p = scan.split_fail_prob(Int(x));
        if (p < lowest) lowest = p;
        if (p < floor_bound) {
            detail = "good x=" + std::to_string(x) + " detects at only " +
                     format_rational(p);
            return false;
        }
    }
    if (good == 0) {
        detail = "no good split points exist";
        return false;
    }
    detail = good.str() + "/1024 good points, lowest detection " +
             format_rational(lowest) + " >= 9/128";
    return true;
}

bool budget_certificates(std::string& detail) {
    BudgetDerivation d = budget_for(Rational(1, 8), Rational(1, 32), Rational(2, 3));
    if (d.budget.pairing_rounds != 96) {
        detail = "k1 = " + std::to_string(d.budget.pairing_rounds) + ", expected 96";
        return false;
    }
    std::uint32_t k2 = d.budget.split_rounds;
    if (k2 < 704 || k2 > 714) {
        detail = "k2 = " + std::to_string(k2) + " outside 709 +/- 5";
        return false;
    }
    if (Rational(Int(k2)) * d.split_detect_p < 6) {
        detail = "k2 * p2 < 6";
        return false;
    }
    // The pairing phase puts np = 6 trials' worth of detections in
    // expectation; the certificate needs (np-1)^2/np >= log 64.
    double np = 6.0;
    if ((np - 1) * (np - 1) / np < std::log(64.0)) {
        detail = "(np-1)^2/np < log 64 at np = 6";
        return false;
    }
    ChernoffQuery pairing = chernoff_certificate(d.pairing_detect_p, 96);
    ChernoffQuery split = chernoff_certificate(d.split_detect_p, k2);
    if (pairing.failure_bound > 0.125 + 1e-9 || split.failure_bound > 0.125 + 1e-9) {
        detail = "a phase certificate exceeds 1/8";
        return false;
    }
    if (chernoff_trials(d.pairing_detect_p, Rational(1, 8)) != 96) {
        detail = "chernoff_trials(1/16, 1/8) != 96";
        return false;
    }
    char buffer[96];
    std::snprintf(buffer, sizeof buffer,
                  "k1=96 k2=%u, bounds %.4f / %.4f <= 1/8", k2,
                  pairing.failure_bound, split.failure_bound);
    detail = buffer;
    return true;
}

bool checker_detection(std::string& detail) {
    LinearSpec spec(Int(7), DomainParams(16));
    const Int a(12345);
    bool ok = true;
    {
        // Wrong only at the checked input itself, by +5.
        auto program = materialize(parse_fault_spec("single-point:12345:5"), spec);
        CampaignResult r = run_campaign(1000, 60, 1, [&](std::uint64_t, BitStream& bits) {
            return check_input(a, spec, *program, kDerived.budget, bits);
        });
        note("single-point at a          " + rate_text(r));
        ok = ok && r.fail_count >= 750;
    }
    {
        auto program = materialize(parse_fault_spec("random-additive:1/4:1"), spec);
        CampaignResult r = run_campaign(1000, 61, 1, [&](std::uint64_t, BitStream& bits) {
            return check_input(a, spec, *program, kDerived.budget, bits);
        });
        note("quarter-far program        " + rate_text(r));
        ok = ok && r.fail_count >= 750;
    }
    detail = ok ? "both oracles rejected at >= 750/1000" : "detection below 750/1000";
    return ok;
}

bool property_tester_detection(std::string& detail) {
    LinearSpec spec(Int(7), DomainParams(8));
    {
        // P(x) = 7x + 3: the boundary answer 1795 is not divisible by 256,
        // so every trial must fail immediately, spending exactly one query.
        auto program = materialize(parse_fault_spec("constant-offset:3"), spec);
        CampaignResult r = run_campaign(1000, 70, 1, [&](std::uint64_t, BitStream& bits) {
            return general_linear_test(*program, spec.domain(), kDerived.budget, bits)
                .verdict;
        });
        if (r.fail_count != 1000 || r.max_queries != 1) {
            detail = "affine offset program: " + std::to_string(r.fail_count) +
                     "/1000 failed, max queries " + std::to_string(r.max_queries);
            return false;
        }
        note("offset-by-3 program        fail 1000/1000 in 1 query (divisibility)");
    }
    {
        auto program = materialize(parse_fault_spec("parity-offset:1"), spec);
        CampaignResult r = run_campaign(1000, 71, 1, [&](std::uint64_t, BitStream& bits) {
            return general_linear_test(*program, spec.domain(), kDerived.budget, bits)
                .verdict;
        });
        note("parity-offset program      " + rate_text(r));
        if (r.fail_count < 750) {
            detail = "parity-offset detection below 750/1000";
            return false;
        }
    }
    detail = "deterministic divisibility rejection; parity offsets >= 750/1000";
    return true;
}

bool estimator_agreement(std::string& detail) {
    LinearSpec spec(Int(7), DomainParams(12));
    const std::uint64_t samples = 10000;
    std::uint64_t seed = 8000, checked = 0;
    auto agrees = [&](const Rational& exact, const Rational& estimate) {
        if (exact == 0 || exact == 1) return estimate == exact;
        double pd = to_double(exact);
        double se = std::sqrt(pd * (1.0 - pd) / double(samples));
        return std::abs(to_double(estimate) - pd) <= 4 * se + 1e-12;
    };
    for (const std::string& fault : zoo(12)) {
        auto program = materialize(parse_fault_spec(fault), spec);
        DiscrepancyScan scan(spec, *program);
        BitStream bits(seed++);
        if (!agrees(exact_pairing_fail_prob(spec, *program),
                    mc_pairing_fail_rate(spec, *program, samples, bits))) {
            detail = fault + ": pairing estimate off by more than 4 SE";
            return false;
        }
        if (!agrees(scan.split_fail_prob_overall(),
                    mc_split_fail_rate(spec, *program, samples, bits))) {
            detail = fault + ": overall split estimate off by more than 4 SE";
            return false;
        }
        if (!agrees(exact_split_fail_prob(Int(5), spec, *program),
                    mc_split_fail_rate_at(Int(5), spec, *program, samples, bits))) {
            detail = fault + ": split estimate at x=5 off by more than 4 SE";
            return false;
        }
        checked += 3;
    }
    detail = std::to_string(checked) + " estimator/exact pairs within 4 SE at n=12";
    return true;
}

bool vector_equivalence(std::string& detail) {
    {
        // m = 1 must behave like the scalar tester, seed for seed.
        LinearSpec scalar_spec(Int(7), DomainParams(8));
        LinearSpec vector_spec(std::vector<Int>{Int(7)}, VectorDomainParams(8, 1));
        FaultSpec fault = parse_fault_spec("random-additive:1/4:1");
        auto scalar_program = materialize(fault, scalar_spec);
        auto vector_program = materialize_vector(fault, vector_spec);
        LinearScalarOracle scalar_correct(scalar_spec);
        LinearVectorOracle vector_correct(vector_spec);

        std::uint64_t matched = 0, faulty_fails = 0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            BitStream a(derive_seed(90, i)), b(derive_seed(90, i));
            Verdict vs = self_test(scalar_spec, scalar_correct, kDerived.budget, a);
            Verdict vh = hom_self_test(vector_spec, vector_correct,
                                       kDerived.budget, b).verdict;
            if (vs.outcome != vh.outcome || !vs.passed()) {
                detail = "correct programs diverged at seed index " + std::to_string(i);
                return false;
            }
            BitStream c(derive_seed(91, i)), d(derive_seed(91, i));
            Verdict fs = self_test(scalar_spec, *scalar_program, kDerived.budget, c);
            Verdict fh = hom_self_test(vector_spec, *vector_program,
                                       kDerived.budget, d).verdict;
            if (fs.outcome != fh.outcome) {
                detail = "faulty-program verdicts diverged at seed index " +
                         std::to_string(i);
                return false;
            }
            ++matched;
            if (!fs.passed()) ++faulty_fails;
        }
        if (faulty_fails < 95) {
            detail = "faulty m=1 fixture detected only " +
                     std::to_string(faulty_fails) + "/100";
            return false;
        }
        note("m=1 verdicts matched scalar on " + std::to_string(matched) +
             "/100 seeds (" + std::to_string(faulty_fails) + " detections)");
    }
    {
        LinearSpec spec(std::vector<Int>{Int(3), Int(5)}, VectorDomainParams(12, 2));
        auto program = materialize_vector(parse_fault_spec("random-additive:1/4:1"), spec);
        CampaignResult r = run_campaign(1000, 92, 1, [&](std::uint64_t, BitStream& bits) {
            return hom_self_test(spec, *program, kDerived.budget, bits).verdict;
        });
        note("m=2 quarter-far program    " + rate_text(r));
        if (r.fail_count < 750) {
            detail = "m=2 detection below 750/1000";
            return false;
        }
    }
    detail = "m=1 tracks the scalar tester; m=2 detects at >= 750/1000";
    return true;
}

bool query_budgets(std::string& detail) {
    const std::uint64_t self_cap = 2 * 96 + 3 * 709;  // 2319
    const std::uint64_t trials = 50;
    std::uint64_t seed = 95;
    std::vector<std::uint64_t> self_max, general_max, check_max, hom_max;
    for (unsigned n : {8u, 16u, 64u}) {
        LinearSpec spec(Int(7), DomainParams(n));
        LinearScalarOracle program(spec);
        LinearSpec vector_spec(std::vector<Int>{Int(3), Int(5)}, VectorDomainParams(n, 2));
        LinearVectorOracle vector_program(vector_spec);

        auto max_queries = [&](std::uint64_t cap, const TrialFn& fn) {
            CampaignResult r = run_campaign(trials, seed++, 1, fn);
            for (const TrialRecord& record : r.trials)
                if (record.verdict.queries_used > cap) return std::uint64_t(0);
            return r.max_queries;
        };
        self_max.push_back(max_queries(self_cap, [&](std::uint64_t, BitStream& bits) {
            return self_test(spec, program, kDerived.budget, bits);
        }));
        general_max.push_back(max_queries(self_cap + 1, [&](std::uint64_t, BitStream& bits) {
            return general_linear_test(program, spec.domain(), kDerived.budget, bits)
                .verdict;
        }));
        check_max.push_back(max_queries(self_cap + 3, [&](std::uint64_t, BitStream& bits) {
            return check_input(Int(3), spec, program, kDerived.budget, bits);
        }));
        hom_max.push_back(max_queries(self_cap, [&](std::uint64_t, BitStream& bits) {
            return hom_self_test(vector_spec, vector_program, kDerived.budget, bits)
                .verdict;
        }));
    }
    auto constant = [](const std::vector<std::uint64_t>& v, std::uint64_t want) {
        for (std::uint64_t m : v)
            if (m != want) return false;
        return true;
    };
    if (!constant(self_max, self_cap) || !constant(general_max, self_cap + 1) ||
        !constant(check_max, self_cap + 3) || !constant(hom_max, self_cap)) {
        detail = "a tester's query ceiling moved with n or exceeded its cap";
        return false;
    }
    detail = "maxima 2319/2320/2322/2319 at every n in {8, 16, 64}";
    return true;
}

}  // namespace

int main() {
    std::printf("lintest acceptance: 10 criteria\n");
    criterion(1, "correct programs pass every tester", correct_program_soundness);
    criterion(2, "eighth-to-half-corrupted programs fail the self-test at >= 3/4",
              self_test_detection);
    criterion(3, "opposite-sign match averages obey the exact counting identity",
              opposite_sign_identity);
    criterion(4, "good split points detect balanced faults at the 9/128 floor",
              good_point_floor);
    criterion(5, "budget derivation pins k1=96, k2~=709 with valid certificates",
              budget_certificates);
    criterion(6, "the checker rejects wrong answers at the checked input",
              checker_detection);
    criterion(7, "the property tester rejects affine and parity-offset programs",
              property_tester_detection);
    criterion(8, "sampled estimators agree with the exact engine within 4 SE",
              estimator_agreement);
    criterion(9, "the vector tester matches the scalar tester and scales to m=2",
              vector_equivalence);
    criterion(10, "query budgets are exact and independent of the domain width",
              query_budgets);
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
