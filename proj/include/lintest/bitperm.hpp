#pragma once

#include <cstdint>

#include "lintest/ints.hpp"

namespace lintest {

// A keyed bijection on [0, 2^width).  Six-round unbalanced Feistel network
// with a splitmix64-based round function, working on arbitrary widths
// (the halves are cpp_ints).  Used by the fault adversaries to pick an
// exact number of fault sites pseudorandomly: the sites are the preimage of
// [0, count), which has size exactly count because the map is a bijection.
class BitPermutation {
public:
    BitPermutation(unsigned width_bits, std::uint64_t key);

    unsigned width() const { return width_; }
    Int apply(const Int& x) const;  // x in [0, 2^width)

private:
    unsigned width_;
    unsigned left_bits_;   // may be 0 when width == 1
    unsigned right_bits_;
    std::uint64_t key_;
};

// Restriction of `perm` to the subdomain [1, 2^width) by cycle walking:
// apply repeatedly until the image is nonzero.  Terminates in at most two
// steps and is a bijection of the subdomain onto itself.
Int permute_nonzero(const BitPermutation& perm, const Int& x);

}  // namespace lintest
