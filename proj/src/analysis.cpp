#include "lintest/analysis.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

#include "lintest/errors.hpp"

namespace lintest {

namespace {

unsigned limit_from_env(const char* name, unsigned fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    unsigned long parsed = std::strtoul(v, &end, 10);
    if (end == v || *end != '\0' || parsed == 0 || parsed > 30) return fallback;
    return static_cast<unsigned>(parsed);
}

// Values this small are safe to add pairwise in int64 without overflow.
constexpr long long kInt64Guard = 1LL << 62;

void check_alpha(const Rational& alpha) {
    if (alpha <= 0 || alpha >= 1)
        throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

ScanLimits ScanLimits::defaults() {
    ScanLimits limits;
    limits.single_scan_bits = limit_from_env("LINTEST_SCAN_BITS", limits.single_scan_bits);
    limits.pair_scan_bits = limit_from_env("LINTEST_PAIR_SCAN_BITS", limits.pair_scan_bits);
    limits.vector_scan_bits = limit_from_env("LINTEST_VECTOR_SCAN_BITS", limits.vector_scan_bits);
    return limits;
}

Int discrepancy(const Int& x, const LinearSpec& spec, const ScalarOracle& oracle) {
    return oracle.query(x) - spec.apply(x);
}

Int discrepancy(const std::vector<Int>& x, const LinearSpec& spec, const VectorOracle& oracle) {
    return oracle.query(x) - spec.apply(x);
}

// --- scalar scan ------------------------------------------------------------------

DiscrepancyScan::DiscrepancyScan(const LinearSpec& spec, const ScalarOracle& oracle,
                                 ScanLimits limits)
    : bits_(spec.bits()), limits_(limits) {
    if (spec.is_vector())
        throw std::invalid_argument("scalar scan needs a scalar spec");
    if (spec.bits() != oracle.domain().bits())
        throw std::invalid_argument("spec and oracle domains differ");
    if (bits_ > limits.single_scan_bits)
        throw DomainTooLarge("domain of 2^" + std::to_string(bits_) +
                             " points exceeds the scan limit of 2^" +
                             std::to_string(limits.single_scan_bits) +
                             " (set LINTEST_SCAN_BITS to raise it)");
    domain_size_ = std::size_t(1) << bits_;
    d_.reserve(domain_size_);
    sign_.reserve(domain_size_);

    Int expected = 0;  // spec.apply(x), maintained incrementally
    const Int& b = spec.coefficient();
    fits64_ = true;
    Int zero_count = 0, pos_count = 0, neg_count = 0;
    for (std::size_t i = 0; i < domain_size_; ++i) {
        Int d = oracle.query(Int(i)) - expected;
        expected += b;
        if (d == 0) {
            ++zero_count;
            sign_.push_back(0);
        } else if (d > 0) {
            ++pos_count;
            sign_.push_back(1);
        } else {
            ++neg_count;
            sign_.push_back(-1);
        }
        if (fits64_ && (d > kInt64Guard || d < -kInt64Guard)) fits64_ = false;
        d_.push_back(std::move(d));
    }
    if (fits64_) {
        d64_.reserve(domain_size_);
        for (const Int& d : d_) d64_.push_back(d.convert_to<long long>());
    }

    Int N = pow2(bits_);
    profile_.bits = bits_;
    profile_.num_zero = zero_count;
    profile_.num_positive = pos_count;
    profile_.num_negative = neg_count;
    profile_.epsilon0 = Rational(pos_count + neg_count, N);
    profile_.epsilon1 = Rational(pos_count, N);
    profile_.epsilon2 = Rational(neg_count, N);
}

Int DiscrepancyScan::discrepancy_at(const Int& x) const {
    if (x < 0 || (x >> bits_) != 0)
        throw std::invalid_argument("point outside scanned domain");
    return d_[x.convert_to<std::size_t>()];
}

Rational DiscrepancyScan::pairing_fail_prob() const {
    std::size_t fails = 0;
    if (sign_[0] != 0) ++fails;  // the x = 0 draw probes P(0) == 0
    if (fits64_) {
        for (std::size_t x = 1; x < domain_size_; ++x)
            if (d64_[x] + d64_[domain_size_ - x] != 0) ++fails;
    } else {
        for (std::size_t x = 1; x < domain_size_; ++x)
            if (d_[x] + d_[domain_size_ - x] != 0) ++fails;
    }
    return Rational(Int(fails), pow2(bits_));
}

Rational DiscrepancyScan::split_fail_prob(const Int& x) const {
    if (x < 0 || (x >> bits_) != 0)
        throw std::invalid_argument("point outside scanned domain");
    std::size_t xi = x.convert_to<std::size_t>();
    std::size_t fails = 0;
    // Splits never wrap for x1 <= x (x2 = x - x1) and always wrap otherwise
    // (x2 = x + 2^n - x1); either way failure is d(x1) + d(x2) != d(x).
    if (fits64_) {
        long long dx = d64_[xi];
        for (std::size_t x1 = 0; x1 <= xi; ++x1)
            if (d64_[x1] + d64_[xi - x1] != dx) ++fails;
        for (std::size_t x1 = xi + 1; x1 < domain_size_; ++x1)
            if (d64_[x1] + d64_[xi + domain_size_ - x1] != dx) ++fails;
    } else {
        const Int& dx = d_[xi];
        for (std::size_t x1 = 0; x1 <= xi; ++x1)
            if (d_[x1] + d_[xi - x1] != dx) ++fails;
        for (std::size_t x1 = xi + 1; x1 < domain_size_; ++x1)
            if (d_[x1] + d_[xi + domain_size_ - x1] != dx) ++fails;
    }
    return Rational(Int(fails), pow2(bits_));
}

void DiscrepancyScan::require_pairwise(const char* op) const {
    if (bits_ > limits_.pair_scan_bits)
        throw DomainTooLarge(std::string(op) + " enumerates 4^n split pairs; 2^" +
                             std::to_string(bits_) + " points exceeds the limit of 2^" +
                             std::to_string(limits_.pair_scan_bits) +
                             " (set LINTEST_PAIR_SCAN_BITS to raise it)");
}

Rational DiscrepancyScan::split_fail_prob_overall() const {
    require_pairwise("overall split failure");
    Int total_fails = 0;
    for (std::size_t x = 0; x < domain_size_; ++x) {
        Rational per = split_fail_prob(Int(x));
        total_fails += numerator(per) * (pow2(bits_) / denominator(per));
    }
    // total_fails counts failing (x, x1) pairs out of 2^n * 2^n.
    return Rational(total_fails, pow2(bits_) * pow2(bits_));
}

std::size_t DiscrepancyScan::match_count_at(std::size_t x) const {
    std::size_t matches = 0;
    for (std::size_t x1 = 0; x1 <= x; ++x1)
        if (sign_[x1] > 0 && sign_[x - x1] < 0) ++matches;
    for (std::size_t x1 = x + 1; x1 < domain_size_; ++x1)
        if (sign_[x1] > 0 && sign_[x + domain_size_ - x1] < 0) ++matches;
    return matches;
}

OppositeSignReport DiscrepancyScan::opposite_sign_report(const Int& x,
                                                         const Rational& alpha) const {
    check_alpha(alpha);
    if (x < 0 || (x >> bits_) != 0)
        throw std::invalid_argument("point outside scanned domain");
    OppositeSignReport report;
    report.x = x;
    report.alpha = alpha;
    report.match_count = Int(match_count_at(x.convert_to<std::size_t>()));
    Rational half = profile_.epsilon0 / 2;
    report.threshold = half * half / alpha * Rational(pow2(bits_));
    report.is_good = Rational(report.match_count) <= report.threshold;
    return report;
}

Int DiscrepancyScan::opposite_sign_match_total() const {
    require_pairwise("opposite-sign match total");
    Int total = 0;
    for (std::size_t x = 0; x < domain_size_; ++x) total += Int(match_count_at(x));
    return total;
}

Int DiscrepancyScan::bad_point_count(const Rational& alpha) const {
    check_alpha(alpha);
    require_pairwise("bad point census");
    Rational half = profile_.epsilon0 / 2;
    Rational threshold = half * half / alpha * Rational(pow2(bits_));
    Int bad = 0;
    for (std::size_t x = 0; x < domain_size_; ++x)
        if (Rational(Int(match_count_at(x))) > threshold) ++bad;
    return bad;
}

// --- vector scan -------------------------------------------------------------------

VectorDiscrepancyScan::VectorDiscrepancyScan(const LinearSpec& spec,
                                             const VectorOracle& oracle,
                                             ScanLimits limits)
    : coord_bits_(spec.bits()),
      dimension_(spec.dimension()),
      bits_(spec.bits() * spec.dimension()) {
    if (spec.bits() != oracle.domain().bits() ||
        spec.dimension() != oracle.domain().dimension())
        throw DimensionMismatch("spec and oracle domains differ");
    if (bits_ > limits.vector_scan_bits)
        throw DomainTooLarge("vector domain of 2^" + std::to_string(bits_) +
                             " points exceeds the scan limit of 2^" +
                             std::to_string(limits.vector_scan_bits) +
                             " (set LINTEST_VECTOR_SCAN_BITS to raise it)");
    domain_size_ = std::size_t(1) << bits_;
    d_.reserve(domain_size_);

    // Walk the domain in flattened order (coordinate 0 least significant),
    // maintaining the expected value incrementally across odometer carries.
    std::vector<Int> coords(dimension_, Int(0));
    Int expected = 0;
    Int coordinate_size = pow2(coord_bits_);
    fits64_ = true;
    Int zero_count = 0, pos_count = 0, neg_count = 0;
    for (std::size_t i = 0; i < domain_size_; ++i) {
        Int d = oracle.query(coords) - expected;
        if (d == 0) ++zero_count;
        else if (d > 0) ++pos_count;
        else ++neg_count;
        if (fits64_ && (d > kInt64Guard || d < -kInt64Guard)) fits64_ = false;
        d_.push_back(std::move(d));

        for (unsigned c = 0; c < dimension_; ++c) {
            coords[c] += 1;
            expected += spec.coefficients()[c];
            if (coords[c] < coordinate_size) break;
            coords[c] = 0;
            expected -= shift_mul_pow2(spec.coefficients()[c], coord_bits_);
        }
    }
    if (fits64_) {
        d64_.reserve(domain_size_);
        for (const Int& d : d_) d64_.push_back(d.convert_to<long long>());
    }

    Int N = pow2(bits_);
    profile_.bits = bits_;
    profile_.num_zero = zero_count;
    profile_.num_positive = pos_count;
    profile_.num_negative = neg_count;
    profile_.epsilon0 = Rational(pos_count + neg_count, N);
    profile_.epsilon1 = Rational(pos_count, N);
    profile_.epsilon2 = Rational(neg_count, N);
}

Int VectorDiscrepancyScan::discrepancy_at(const std::vector<Int>& x) const {
    if (x.size() != dimension_)
        throw DimensionMismatch("point dimension does not match scan");
    std::size_t flat = 0;
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] < 0 || (x[i] >> coord_bits_) != 0)
            throw std::invalid_argument("point outside scanned domain");
        flat = (flat << coord_bits_) | x[i].convert_to<std::size_t>();
    }
    return d_[flat];
}

Rational VectorDiscrepancyScan::pairing_fail_prob() const {
    // The pairing draw conditions on every coordinate being nonzero, so the
    // probability space is the (2^n - 1)^m all-nonzero vectors.  The partner
    // of x has coordinates 2^n - x_i, again all nonzero.
    std::size_t coord_size = std::size_t(1) << coord_bits_;
    std::size_t mask = coord_size - 1;
    Int fails = 0;
    Int eligible_total = 1;
    for (unsigned c = 0; c < dimension_; ++c) eligible_total *= Int(coord_size - 1);

    for (std::size_t flat = 0; flat < domain_size_; ++flat) {
        std::size_t rest = flat;
        std::size_t partner = 0;
        bool eligible = true;
        for (unsigned c = 0; c < dimension_; ++c) {
            std::size_t digit = rest & mask;
            rest >>= coord_bits_;
            if (digit == 0) {
                eligible = false;
                break;
            }
            partner |= (coord_size - digit) << (c * coord_bits_);
        }
        if (!eligible) continue;
        bool fail = fits64_ ? (d64_[flat] + d64_[partner] != 0)
                            : (d_[flat] + d_[partner] != 0);
        if (fail) ++fails;
    }
    return Rational(Int(fails), eligible_total);
}

Rational VectorDiscrepancyScan::split_fail_prob(const std::vector<Int>& x) const {
    if (x.size() != dimension_)
        throw DimensionMismatch("point dimension does not match scan");
    std::size_t coord_size = std::size_t(1) << coord_bits_;
    std::size_t mask = coord_size - 1;
    std::vector<std::size_t> xd(dimension_);
    std::size_t x_flat = 0;
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] < 0 || (x[i] >> coord_bits_) != 0)
            throw std::invalid_argument("point outside scanned domain");
        xd[i] = x[i].convert_to<std::size_t>();
        x_flat = (x_flat << coord_bits_) | xd[i];
    }

    std::size_t fails = 0;
    for (std::size_t y = 0; y < domain_size_; ++y) {
        std::size_t rest = y;
        std::size_t z = 0;
        for (unsigned c = 0; c < dimension_; ++c) {
            std::size_t yd = rest & mask;
            rest >>= coord_bits_;
            std::size_t zd = yd <= xd[c] ? xd[c] - yd : xd[c] + coord_size - yd;
            z |= zd << (c * coord_bits_);
        }
        bool fail = fits64_ ? (d64_[y] + d64_[z] != d64_[x_flat])
                            : (d_[y] + d_[z] != d_[x_flat]);
        if (fail) ++fails;
    }
    return Rational(Int(fails), pow2(bits_));
}

// --- one-shot conveniences -----------------------------------------------------------

DiscrepancyProfile profile(const LinearSpec& spec, const ScalarOracle& oracle,
                           ScanLimits limits) {
    return DiscrepancyScan(spec, oracle, limits).profile();
}

OppositeSignReport opposite_sign_report(const Int& x, const Rational& alpha,
                                        const LinearSpec& spec, const ScalarOracle& oracle,
                                        ScanLimits limits) {
    return DiscrepancyScan(spec, oracle, limits).opposite_sign_report(x, alpha);
}

Rational exact_pairing_fail_prob(const LinearSpec& spec, const ScalarOracle& oracle,
                                 ScanLimits limits) {
    return DiscrepancyScan(spec, oracle, limits).pairing_fail_prob();
}

Rational exact_split_fail_prob(const Int& x, const LinearSpec& spec,
                               const ScalarOracle& oracle, ScanLimits limits) {
    return DiscrepancyScan(spec, oracle, limits).split_fail_prob(x);
}

// --- trial counts ----------------------------------------------------------------------

namespace {

bool certificate_holds(const Rational& p, const Int& trials, const Rational& target) {
    Rational np = p * Rational(trials);
    if (np <= 1) return false;
    Rational exponent = (np - 1) * (np - 1) / (2 * np);
    double need = std::log(1.0 / to_double(target));
    return to_double(exponent) >= need - 1e-9;
}

}  // namespace

std::uint64_t chernoff_trials(const Rational& p, const Rational& target_failure) {
    if (p <= 0 || p > 1)
        throw InvalidProbability("per-trial detection probability must lie in (0, 1]; got " +
                                 format_rational(p));
    if (target_failure <= 0 || target_failure >= 1)
        throw InvalidProbability("target failure probability must lie in (0, 1)");

    Int trials;
    if (target_failure == Rational(1, 8)) {
        // Standard sizing: ceil(6/p) puts the expected detection count at 6
        // or above, where the lower-tail bound dips under 1/8.
        trials = ceil_rational(Rational(6) / p);
    } else {
        // Smallest c with (c-1)^2 / 2c >= ln(1/target), then walk up from a
        // little under c/p to absorb the floating-point slop.
        double lhs_needed = std::log(1.0 / to_double(target_failure));
        double c = 1.0 + lhs_needed + std::sqrt((1.0 + lhs_needed) * (1.0 + lhs_needed) - 1.0);
        double start = std::floor(c / to_double(p)) - 8.0;
        trials = start < 1.0 ? Int(1) : Int(static_cast<std::uint64_t>(start));
        while (!certificate_holds(p, trials, target_failure)) ++trials;
    }
    if (!certificate_holds(p, trials, target_failure))
        throw Error("trial-count certificate failed; parameters are too extreme");
    return trials.convert_to<std::uint64_t>();
}

ChernoffQuery chernoff_certificate(const Rational& p, std::uint64_t trials) {
    if (p <= 0 || p > 1)
        throw InvalidProbability("per-trial detection probability must lie in (0, 1]");
    ChernoffQuery q;
    q.p = p;
    q.trials = trials;
    Rational np = p * Rational(trials);
    if (np <= 1) {
        q.failure_bound = 1.0;
        return q;
    }
    Rational exponent = (np - 1) * (np - 1) / (2 * np);
    q.failure_bound = std::exp(-to_double(exponent));
    return q;
}

// --- nearest linear function --------------------------------------------------------------

NearestLinear nearest_linear(const ScalarOracle& oracle, ScanLimits limits) {
    unsigned n = oracle.domain().bits();
    if (n > limits.single_scan_bits)
        throw DomainTooLarge("domain of 2^" + std::to_string(n) +
                             " points exceeds the scan limit of 2^" +
                             std::to_string(limits.single_scan_bits) +
                             " (set LINTEST_SCAN_BITS to raise it)");
    std::size_t N = std::size_t(1) << n;

    // P agrees with x -> b*x exactly at the x where x divides P(x) with
    // quotient b (plus x = 0 whenever P(0) == 0, for every b).  Majority
    // vote over the quotients finds the closest coefficient.
    std::map<Int, Int> votes;
    Int at_zero = oracle.query(Int(0));
    for (std::size_t i = 1; i < N; ++i) {
        Int x(i);
        Int value = oracle.query(x);
        if (value % x == 0) votes[value / x] += 1;
    }

    NearestLinear result;
    Int best_votes = -1;
    for (const auto& [candidate, count] : votes) {
        if (count > best_votes) {  // map order breaks ties toward smaller b
            best_votes = count;
            result.coefficient = candidate;
        }
    }
    if (best_votes < 0) {
        result.coefficient = 0;
        best_votes = 0;
    }
    result.agreement_count = best_votes + (at_zero == 0 ? 1 : 0);
    result.distance = Rational(Int(N) - result.agreement_count, Int(N));
    return result;
}

// --- sampled estimators --------------------------------------------------------------------

Rational mc_pairing_fail_rate(const LinearSpec& spec, const ScalarOracle& oracle,
                              std::uint64_t samples, BitStream& bits) {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    DomainParams domain = spec.domain();
    std::uint64_t fails = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Int x = sample_uniform(domain, bits);
        if (!pairing_check(x, spec, oracle).passed()) ++fails;
    }
    return Rational(Int(fails), Int(samples));
}

Rational mc_split_fail_rate(const LinearSpec& spec, const ScalarOracle& oracle,
                            std::uint64_t samples, BitStream& bits) {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    DomainParams domain = spec.domain();
    std::uint64_t fails = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Int x = sample_uniform(domain, bits);
        if (!split_check_once(x, spec, oracle, bits).passed()) ++fails;
    }
    return Rational(Int(fails), Int(samples));
}

Rational mc_split_fail_rate_at(const Int& x, const LinearSpec& spec,
                               const ScalarOracle& oracle,
                               std::uint64_t samples, BitStream& bits) {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    std::uint64_t fails = 0;
    for (std::uint64_t i = 0; i < samples; ++i)
        if (!split_check_once(x, spec, oracle, bits).passed()) ++fails;
    return Rational(Int(fails), Int(samples));
}

}  // namespace lintest
