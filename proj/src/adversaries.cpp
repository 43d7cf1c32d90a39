#include "lintest/adversaries.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lintest/errors.hpp"

namespace lintest {

namespace {

// Domains up to this many bits get a dense discrepancy table (a pure cache of
// the rule; the rule stays the definition).
constexpr unsigned kTableBits = 12;

// fraction * 2^bits, required to be a non-negative integer.
Int exact_count(const Rational& fraction, const Int& domain_size, const char* what) {
    if (fraction < 0 || fraction > 1)
        throw UnrealizableFraction(std::string(what) + ": fraction must lie in [0, 1]");
    Int num = numerator(fraction) * domain_size;
    Int den = denominator(fraction);
    if (num % den != 0)
        throw UnrealizableFraction(std::string(what) + ": fraction " +
                                   format_rational(fraction) +
                                   " is not an exact point count on this domain");
    return num / den;
}

void require_magnitude(const FaultSpec& fault) {
    if (fault.kind != FaultKind::Correct && fault.magnitude == 0)
        throw std::invalid_argument("fault magnitude must be nonzero");
}

MaterializedStats signed_split_stats(const Int& pos_count, const Int& neg_count,
                                     const Int& domain_size) {
    MaterializedStats s;
    s.fault_count = pos_count + neg_count;
    s.domain_size = domain_size;
    s.epsilon0 = Rational(s.fault_count, domain_size);
    s.epsilon1 = Rational(pos_count, domain_size);
    s.epsilon2 = Rational(neg_count, domain_size);
    return s;
}

}  // namespace

const char* fault_kind_name(FaultKind k) {
    switch (k) {
        case FaultKind::Correct: return "correct";
        case FaultKind::RandomAdditive: return "random-additive";
        case FaultKind::SignBalancedPaired: return "sign-balanced";
        case FaultKind::ConstantOffset: return "constant-offset";
        case FaultKind::AffineMultipleOf2n: return "affine-2n";
        case FaultKind::SinglePoint: return "single-point";
        case FaultKind::ParityOffset: return "parity-offset";
    }
    return "unknown";
}

std::optional<FaultKind> fault_kind_from_string(const std::string& name) {
    for (FaultKind k : {FaultKind::Correct, FaultKind::RandomAdditive,
                        FaultKind::SignBalancedPaired, FaultKind::ConstantOffset,
                        FaultKind::AffineMultipleOf2n, FaultKind::SinglePoint,
                        FaultKind::ParityOffset})
        if (name == fault_kind_name(k)) return k;
    if (name == "sign-balanced-paired") return FaultKind::SignBalancedPaired;
    return std::nullopt;
}

// --- scalar adversary ----------------------------------------------------------

ScalarAdversary::ScalarAdversary(FaultSpec fault, LinearSpec spec)
    : ScalarOracle(spec.domain(), /*domain_extension=*/true),
      fault_(std::move(fault)),
      spec_(std::move(spec)) {
    require_magnitude(fault_);
    const unsigned n = spec_.bits();
    const Int N = pow2(n);
    const Int& mag = fault_.magnitude;
    stats_.domain_size = N;

    switch (fault_.kind) {
        case FaultKind::Correct:
            break;
        case FaultKind::RandomAdditive: {
            if (!fault_.explicit_sites.empty()) {
                if (fault_.explicit_sites.size() != fault_.explicit_offsets.size())
                    throw std::invalid_argument("explicit fault sites/offsets length mismatch");
                std::set<Int> seen;
                Int pos = 0, neg = 0;
                for (std::size_t i = 0; i < fault_.explicit_sites.size(); ++i) {
                    const Int& s = fault_.explicit_sites[i];
                    const Int& off = fault_.explicit_offsets[i];
                    if (!spec_.domain().contains(s))
                        throw std::invalid_argument("explicit fault site outside domain");
                    if (off == 0)
                        throw std::invalid_argument("explicit fault offset must be nonzero");
                    if (!seen.insert(s).second)
                        throw std::invalid_argument("explicit fault sites must be distinct");
                    (off > 0 ? pos : neg) += 1;
                    explicit_sorted_.emplace_back(s, off);
                }
                std::sort(explicit_sorted_.begin(), explicit_sorted_.end());
                stats_ = signed_split_stats(pos, neg, N);
                break;
            }
            Int count = exact_count(fault_.fraction, N, "random-additive");
            pos_cut_ = (count + 1) / 2;  // ceil: positives take the extra site
            Int neg_cut = count - pos_cut_;
            perm_.emplace(n, fault_.site_seed);
            stats_ = mag > 0 ? signed_split_stats(pos_cut_, neg_cut, N)
                             : signed_split_stats(neg_cut, pos_cut_, N);
            stats_.fault_count = count;
            break;
        }
        case FaultKind::SignBalancedPaired: {
            Int count = exact_count(fault_.fraction, N, "sign-balanced");
            if (count % 2 != 0)
                throw UnrealizableFraction("sign-balanced: fraction must give an even fault count");
            pair_count_ = count / 2;
            if (pair_count_ > 0) {
                // Pairs live on {x, 2^n - x} with x in [1, 2^(n-1)); 0 and the
                // self-paired midpoint can never be corrupted.
                if (n < 2 || pair_count_ > pow2(n - 1) - 1)
                    throw UnrealizableFraction("sign-balanced: domain has too few pairs for " +
                                               format_rational(fault_.fraction));
                perm_.emplace(n - 1, fault_.site_seed);
            }
            stats_ = signed_split_stats(pair_count_, pair_count_, N);
            break;
        }
        case FaultKind::ConstantOffset:
        case FaultKind::AffineMultipleOf2n:
            stats_ = mag > 0 ? signed_split_stats(N, 0, N) : signed_split_stats(0, N, N);
            break;
        case FaultKind::SinglePoint: {
            if (fault_.site.size() != 1)
                throw std::invalid_argument("single-point fault needs exactly one site");
            if (!spec_.domain().contains(fault_.site[0]))
                throw std::invalid_argument("single-point fault site outside domain");
            stats_ = mag > 0 ? signed_split_stats(1, 0, N) : signed_split_stats(0, 1, N);
            break;
        }
        case FaultKind::ParityOffset: {
            Int half = N / 2;
            stats_ = mag > 0 ? signed_split_stats(half, 0, N) : signed_split_stats(0, half, N);
            break;
        }
    }

    if (n <= kTableBits) {
        std::size_t size = std::size_t(1) << n;
        table_.reserve(size + 1);
        for (std::size_t i = 0; i <= size; ++i) table_.push_back(rule_discrepancy(Int(i)));
        use_table_ = true;
    }
}

Int ScalarAdversary::rule_discrepancy(const Int& x) const {
    const unsigned n = spec_.bits();
    const Int& mag = fault_.magnitude;
    switch (fault_.kind) {
        case FaultKind::Correct:
            return 0;
        case FaultKind::RandomAdditive: {
            if (!explicit_sorted_.empty()) {
                auto it = std::lower_bound(
                    explicit_sorted_.begin(), explicit_sorted_.end(), x,
                    [](const std::pair<Int, Int>& e, const Int& key) { return e.first < key; });
                if (it != explicit_sorted_.end() && it->first == x) return it->second;
                return 0;
            }
            if (stats_.fault_count == 0 || (x >> n) != 0) return 0;  // 2^n is never a site
            Int rank = perm_->apply(x);
            if (rank >= stats_.fault_count) return 0;
            return rank < pos_cut_ ? mag : -mag;
        }
        case FaultKind::SignBalancedPaired: {
            if (pair_count_ == 0 || x == 0 || (x >> n) != 0) return 0;
            Int half = pow2(n - 1);
            if (x == half) return 0;
            bool upper = x > half;
            Int rep = upper ? pow2(n) - x : x;  // representative in [1, 2^(n-1))
            Int rank = permute_nonzero(*perm_, rep);
            if (rank > pair_count_) return 0;
            return upper ? -mag : mag;
        }
        case FaultKind::ConstantOffset:
            return mag;
        case FaultKind::AffineMultipleOf2n:
            return shift_mul_pow2(mag, n);
        case FaultKind::SinglePoint:
            return x == fault_.site[0] ? mag : Int(0);
        case FaultKind::ParityOffset:
            return boost::multiprecision::bit_test(x, 0) ? shift_mul_pow2(mag, n) : Int(0);
    }
    return 0;
}

Int ScalarAdversary::discrepancy_at(const Int& x) const {
    if (use_table_) {
        // Table covers [0, 2^n]; anything else is a caller bug.
        return table_[static_cast<std::size_t>(x)];
    }
    return rule_discrepancy(x);
}

Int ScalarAdversary::value_at(const Int& x) const {
    return spec_.apply(x) + discrepancy_at(x);
}

// --- vector adversary -----------------------------------------------------------

VectorAdversary::VectorAdversary(FaultSpec fault, LinearSpec spec)
    : VectorOracle(spec.vector_domain()), fault_(std::move(fault)), spec_(std::move(spec)) {
    require_magnitude(fault_);
    const unsigned n = spec_.bits();
    const unsigned m = spec_.dimension();
    const unsigned w = n * m;
    const Int N = Int(1) << w;
    const Int& mag = fault_.magnitude;
    stats_.domain_size = N;

    switch (fault_.kind) {
        case FaultKind::Correct:
            break;
        case FaultKind::RandomAdditive: {
            if (!fault_.explicit_sites.empty())
                throw std::invalid_argument("explicit fault sites are scalar-only");
            Int count = exact_count(fault_.fraction, N, "random-additive");
            pos_cut_ = (count + 1) / 2;
            Int neg_cut = count - pos_cut_;
            perm_.emplace(w, fault_.site_seed);
            stats_ = mag > 0 ? signed_split_stats(pos_cut_, neg_cut, N)
                             : signed_split_stats(neg_cut, pos_cut_, N);
            stats_.fault_count = count;
            break;
        }
        case FaultKind::SignBalancedPaired:
            throw std::invalid_argument("sign-balanced faults are scalar-only");
        case FaultKind::ConstantOffset:
        case FaultKind::AffineMultipleOf2n:
            stats_ = mag > 0 ? signed_split_stats(N, 0, N) : signed_split_stats(0, N, N);
            break;
        case FaultKind::SinglePoint: {
            if (fault_.site.size() != m)
                throw DimensionMismatch("single-point fault site has wrong dimension");
            if (!spec_.vector_domain().contains(fault_.site))
                throw std::invalid_argument("single-point fault site outside domain");
            site_flat_ = flatten(fault_.site);
            stats_ = mag > 0 ? signed_split_stats(1, 0, N) : signed_split_stats(0, 1, N);
            break;
        }
        case FaultKind::ParityOffset: {
            Int half = N / 2;
            stats_ = mag > 0 ? signed_split_stats(half, 0, N) : signed_split_stats(0, half, N);
            break;
        }
    }

    if (w <= kTableBits) {
        std::size_t size = std::size_t(1) << w;
        table_.reserve(size);
        for (std::size_t i = 0; i < size; ++i) table_.push_back(rule_discrepancy(Int(i)));
        use_table_ = true;
    }
}

Int VectorAdversary::flatten(const std::vector<Int>& x) const {
    const unsigned n = spec_.bits();
    Int acc = 0;
    for (std::size_t i = x.size(); i-- > 0;) acc = (acc << n) | x[i];
    return acc;
}

Int VectorAdversary::rule_discrepancy(const Int& flattened) const {
    const unsigned n = spec_.bits();
    const unsigned m = spec_.dimension();
    const Int& mag = fault_.magnitude;
    switch (fault_.kind) {
        case FaultKind::Correct:
        case FaultKind::SignBalancedPaired:
            return 0;
        case FaultKind::RandomAdditive: {
            if (stats_.fault_count == 0) return 0;
            Int rank = perm_->apply(flattened);
            if (rank >= stats_.fault_count) return 0;
            return rank < pos_cut_ ? mag : -mag;
        }
        case FaultKind::ConstantOffset:
            return mag;
        case FaultKind::AffineMultipleOf2n:
            return shift_mul_pow2(mag, n);
        case FaultKind::SinglePoint:
            return flattened == site_flat_ ? mag : Int(0);
        case FaultKind::ParityOffset: {
            // Parity of the coordinate sum == XOR of each coordinate's low bit.
            bool odd = false;
            for (unsigned i = 0; i < m; ++i)
                odd ^= boost::multiprecision::bit_test(flattened, i * n);
            return odd ? shift_mul_pow2(mag, n) : Int(0);
        }
    }
    return 0;
}

Int VectorAdversary::discrepancy_at(const std::vector<Int>& x) const {
    Int flat = flatten(x);
    if (use_table_) return table_[static_cast<std::size_t>(flat)];
    return rule_discrepancy(flat);
}

Int VectorAdversary::value_at(const std::vector<Int>& x) const {
    return spec_.apply(x) + discrepancy_at(x);
}

std::unique_ptr<ScalarAdversary> materialize(const FaultSpec& fault, const LinearSpec& spec) {
    return std::make_unique<ScalarAdversary>(fault, spec);
}

std::unique_ptr<VectorAdversary> materialize_vector(const FaultSpec& fault,
                                                    const LinearSpec& spec) {
    return std::make_unique<VectorAdversary>(fault, spec);
}

// --- CLI grammar ------------------------------------------------------------------

FaultSpec parse_fault_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (!text.empty() && text.back() == ':') parts.push_back("");
    if (parts.empty()) throw std::invalid_argument("empty fault spec");

    auto kind = fault_kind_from_string(parts[0]);
    if (!kind) throw std::invalid_argument("unknown fault kind: " + parts[0]);

    auto want = [&](std::size_t count) {
        if (parts.size() != count + 1)
            throw std::invalid_argument("fault " + parts[0] + " takes " +
                                        std::to_string(count) + " argument(s): " + text);
    };

    FaultSpec f;
    f.kind = *kind;
    switch (*kind) {
        case FaultKind::Correct:
            want(0);
            break;
        case FaultKind::RandomAdditive:
        case FaultKind::SignBalancedPaired:
            want(2);
            f.fraction = parse_rational(parts[1]);
            f.magnitude = parse_int(parts[2]);
            break;
        case FaultKind::ConstantOffset:
        case FaultKind::AffineMultipleOf2n:
        case FaultKind::ParityOffset:
            want(1);
            f.magnitude = parse_int(parts[1]);
            break;
        case FaultKind::SinglePoint: {
            want(2);
            std::istringstream coords(parts[1]);
            std::string c;
            while (std::getline(coords, c, ',')) f.site.push_back(parse_int(c));
            if (f.site.empty()) throw std::invalid_argument("single-point fault needs a site");
            f.magnitude = parse_int(parts[2]);
            break;
        }
    }
    return f;
}

std::string format_fault_spec(const FaultSpec& fault) {
    std::string out = fault_kind_name(fault.kind);
    switch (fault.kind) {
        case FaultKind::Correct:
            break;
        case FaultKind::RandomAdditive:
        case FaultKind::SignBalancedPaired:
            out += ":" + format_rational(fault.fraction) + ":" + fault.magnitude.str();
            break;
        case FaultKind::ConstantOffset:
        case FaultKind::AffineMultipleOf2n:
        case FaultKind::ParityOffset:
            out += ":" + fault.magnitude.str();
            break;
        case FaultKind::SinglePoint: {
            out += ":";
            for (std::size_t i = 0; i < fault.site.size(); ++i) {
                if (i) out += ",";
                out += fault.site[i].str();
            }
            out += ":" + fault.magnitude.str();
            break;
        }
    }
    return out;
}

}  // namespace lintest
