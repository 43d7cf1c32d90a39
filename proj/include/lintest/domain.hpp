#pragma once

#include <vector>

#include "lintest/ints.hpp"
#include "lintest/random.hpp"

namespace lintest {

// The n-bit domain D_n = {0, 1, ..., 2^n - 1}.  Arithmetic on answers is
// ordinary integer arithmetic (not mod 2^n); the wrap bookkeeping lives in
// split_random's delta flag.
class DomainParams {
public:
    explicit DomainParams(unsigned bits);

    unsigned bits() const { return bits_; }
    Int size() const { return pow2(bits_); }
    Int max_element() const { return pow2(bits_) - 1; }
    bool contains(const Int& x) const;

private:
    unsigned bits_;
};

// m-dimensional product domain D_n^m.
class VectorDomainParams {
public:
    VectorDomainParams(unsigned bits, unsigned dimension);

    unsigned bits() const { return bits_; }
    unsigned dimension() const { return dimension_; }
    DomainParams coordinate() const { return DomainParams(bits_); }
    Int size() const;  // 2^(n*m)
    bool contains(const std::vector<Int>& x) const;

private:
    unsigned bits_;
    unsigned dimension_;
};

// The linear function being claimed: f(x) = b*x over D_n, or
// f(x) = sum_i b_i * x_i over D_n^m.  Coefficients are arbitrary integers
// (any sign, any size).
class LinearSpec {
public:
    LinearSpec(Int coefficient, DomainParams domain);
    LinearSpec(std::vector<Int> coefficients, VectorDomainParams domain);

    bool is_vector() const { return dimension_ > 1 || !scalar_; }
    unsigned bits() const { return bits_; }
    unsigned dimension() const { return dimension_; }

    // Scalar accessors; throw std::logic_error when the spec is vector-valued.
    const Int& coefficient() const;
    DomainParams domain() const;

    const std::vector<Int>& coefficients() const { return coefficients_; }
    VectorDomainParams vector_domain() const;

    Int apply(const Int& x) const;
    Int apply(const std::vector<Int>& x) const;

    // sum_i b_i (equals b in the scalar case); the pairing identity compares
    // P(x) + P(a - x) against coefficient_sum * 2^n.
    Int coefficient_sum() const;

private:
    bool scalar_;
    unsigned bits_;
    unsigned dimension_;
    std::vector<Int> coefficients_;
};

// Result of splitting x into a random pair (x1, x2) with
// x1 + x2 == x + delta * 2^n, both halves uniform on D_n individually.
struct SplitOutcome {
    Int x1;
    Int x2;
    int delta = 0;  // 1 iff the pair wraps past 2^n

    bool wraps() const { return delta != 0; }
};

// Coordinate-wise split of a vector point; deltas[i] applies to coordinate i.
struct VectorSplitOutcome {
    std::vector<Int> y;
    std::vector<Int> z;
    std::vector<int> deltas;
};

// Uniform draw from D_n consuming exactly n bits of the stream.
Int sample_uniform(const DomainParams& domain, BitStream& bits);

// Uniform draw from D_n^m consuming exactly n*m bits, coordinate 0 first.
std::vector<Int> sample_uniform(const VectorDomainParams& domain, BitStream& bits);

// Draw x1 uniform on D_n and complete the pair: if x1 <= x then
// x2 = x - x1 (delta = 0), otherwise x2 = x + 2^n - x1 (delta = 1).
// Ties take the non-wrapping branch, so x2 = 0 is a legal second half.
// Equivalently x2 == (x - x1) mod 2^n; tests pin that equivalence.
SplitOutcome split_random(const Int& x, const DomainParams& domain, BitStream& bits);

// Coordinate-wise version over D_n^m.
VectorSplitOutcome split_random(const std::vector<Int>& x,
                                const VectorDomainParams& domain,
                                BitStream& bits);

}  // namespace lintest
