#include "lintest/domain.hpp"

#include <stdexcept>
#include <string>

#include "lintest/errors.hpp"

namespace lintest {

// --- integer helpers ----------------------------------------------------------

Int pow2(unsigned n) {
    return Int(1) << n;
}

Int shift_mul_pow2(const Int& b, unsigned n) {
    return b << n;  // cpp_int shifts preserve sign
}

Int ceil_div(const Int& num, const Int& den) {
    if (den <= 0) throw std::invalid_argument("ceil_div: denominator must be positive");
    Int q = num / den;            // truncates toward zero
    if (num > 0 && q * den != num) ++q;
    return q;
}

Int ceil_rational(const Rational& r) {
    return ceil_div(numerator(r), denominator(r));
}

namespace {
bool is_signed_digits(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}
}  // namespace

Int parse_int(const std::string& text) {
    if (!is_signed_digits(text))
        throw std::invalid_argument("malformed integer: " + text);
    return text[0] == '+' ? Int(text.substr(1)) : Int(text);
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    if (auto slash = text.find('/'); slash != std::string::npos) {
        Int num = parse_int(text.substr(0, slash));
        Int den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (frac.empty() || !is_signed_digits(frac) || frac[0] == '-' || frac[0] == '+')
            throw std::invalid_argument("malformed decimal: " + text);
        Int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Int whole_i = parse_int(whole);
        Int frac_i = parse_int(frac);
        bool negative = text[0] == '-';
        Int num = whole_i * scale + (negative ? -frac_i : frac_i);
        return Rational(num, scale);
    }
    return Rational(parse_int(text));
}

std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

// --- domains -------------------------------------------------------------------

namespace {
// Desk-scale sanity cap; 2^n never needs to be materialized, but n itself
// participates in shifts and bit loops.
constexpr unsigned kMaxBits = 1U << 20;
}  // namespace

DomainParams::DomainParams(unsigned bits) : bits_(bits) {
    if (bits == 0) throw std::invalid_argument("domain needs at least 1 bit");
    if (bits > kMaxBits) throw std::invalid_argument("domain bit width out of range");
}

bool DomainParams::contains(const Int& x) const {
    return x >= 0 && (x >> bits_) == 0;
}

VectorDomainParams::VectorDomainParams(unsigned bits, unsigned dimension)
    : bits_(bits), dimension_(dimension) {
    if (bits == 0) throw std::invalid_argument("domain needs at least 1 bit");
    if (bits > kMaxBits) throw std::invalid_argument("domain bit width out of range");
    if (dimension == 0) throw std::invalid_argument("dimension must be at least 1");
}

Int VectorDomainParams::size() const {
    return Int(1) << (static_cast<std::uint64_t>(bits_) * dimension_);
}

bool VectorDomainParams::contains(const std::vector<Int>& x) const {
    if (x.size() != dimension_) return false;
    for (const Int& xi : x)
        if (xi < 0 || (xi >> bits_) != 0) return false;
    return true;
}

// --- linear specs ----------------------------------------------------------------

LinearSpec::LinearSpec(Int coefficient, DomainParams domain)
    : scalar_(true), bits_(domain.bits()), dimension_(1) {
    coefficients_.push_back(std::move(coefficient));
}

LinearSpec::LinearSpec(std::vector<Int> coefficients, VectorDomainParams domain)
    : scalar_(false),
      bits_(domain.bits()),
      dimension_(domain.dimension()),
      coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != dimension_)
        throw DimensionMismatch("coefficient count " + std::to_string(coefficients_.size()) +
                                " does not match dimension " + std::to_string(dimension_));
}

const Int& LinearSpec::coefficient() const {
    if (!scalar_) throw std::logic_error("vector spec has no single coefficient");
    return coefficients_[0];
}

DomainParams LinearSpec::domain() const {
    if (!scalar_) throw std::logic_error("vector spec has no scalar domain");
    return DomainParams(bits_);
}

VectorDomainParams LinearSpec::vector_domain() const {
    return VectorDomainParams(bits_, dimension_);
}

Int LinearSpec::apply(const Int& x) const {
    if (!scalar_) throw std::logic_error("vector spec applied to scalar point");
    return coefficients_[0] * x;
}

Int LinearSpec::apply(const std::vector<Int>& x) const {
    if (x.size() != coefficients_.size())
        throw DimensionMismatch("point dimension " + std::to_string(x.size()) +
                                " does not match spec dimension " +
                                std::to_string(coefficients_.size()));
    Int acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += coefficients_[i] * x[i];
    return acc;
}

Int LinearSpec::coefficient_sum() const {
    Int acc = 0;
    for (const Int& b : coefficients_) acc += b;
    return acc;
}

// --- sampling ----------------------------------------------------------------------

Int sample_uniform(const DomainParams& domain, BitStream& bits) {
    return bits.take_bits(domain.bits());
}

std::vector<Int> sample_uniform(const VectorDomainParams& domain, BitStream& bits) {
    std::vector<Int> x;
    x.reserve(domain.dimension());
    for (unsigned i = 0; i < domain.dimension(); ++i)
        x.push_back(bits.take_bits(domain.bits()));
    return x;
}

SplitOutcome split_random(const Int& x, const DomainParams& domain, BitStream& bits) {
    if (!domain.contains(x)) throw std::invalid_argument("split point outside domain");
    SplitOutcome out;
    out.x1 = sample_uniform(domain, bits);
    if (out.x1 <= x) {
        out.x2 = x - out.x1;
        out.delta = 0;
    } else {
        out.x2 = x + domain.size() - out.x1;
        out.delta = 1;
    }
    return out;
}

VectorSplitOutcome split_random(const std::vector<Int>& x,
                                const VectorDomainParams& domain,
                                BitStream& bits) {
    if (x.size() != domain.dimension())
        throw DimensionMismatch("split point dimension " + std::to_string(x.size()) +
                                " does not match domain dimension " +
                                std::to_string(domain.dimension()));
    VectorSplitOutcome out;
    out.y.reserve(x.size());
    out.z.reserve(x.size());
    out.deltas.reserve(x.size());
    DomainParams coord = domain.coordinate();
    for (const Int& xi : x) {
        SplitOutcome s = split_random(xi, coord, bits);
        out.y.push_back(std::move(s.x1));
        out.z.push_back(std::move(s.x2));
        out.deltas.push_back(s.delta);
    }
    return out;
}

}  // namespace lintest
