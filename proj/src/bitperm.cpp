#include "lintest/bitperm.hpp"

#include <stdexcept>

#include "lintest/random.hpp"

namespace lintest {

namespace {

constexpr unsigned kRounds = 6;

// Round function: hash (key, round, half) down to 64 bits, then stretch to
// `width` bits.  The half may be any width; fold it limb by limb.
Int round_value(std::uint64_t key, unsigned round, const Int& half, unsigned width) {
    std::uint64_t h = splitmix64(key ^ (0x9E3779B97F4A7C15ULL * (round + 1)));
    Int v = half;
    while (v != 0) {
        h = splitmix64(h ^ static_cast<std::uint64_t>(v & 0xFFFFFFFFFFFFFFFFULL));
        v >>= 64;
    }
    if (width <= 64) {
        std::uint64_t mask = width == 64 ? ~0ULL : ((1ULL << width) - 1);
        return Int(h & mask);
    }
    Int out = 0;
    unsigned pos = 0;
    std::uint64_t chunk_state = h;
    while (pos < width) {
        chunk_state = splitmix64(chunk_state + 1);
        unsigned take = std::min(64U, width - pos);
        std::uint64_t mask = take == 64 ? ~0ULL : ((1ULL << take) - 1);
        out |= Int(chunk_state & mask) << pos;
        pos += take;
    }
    return out;
}

}  // namespace

BitPermutation::BitPermutation(unsigned width_bits, std::uint64_t key)
    : width_(width_bits),
      left_bits_(width_bits / 2),
      right_bits_(width_bits - width_bits / 2),
      key_(key) {
    if (width_bits == 0) throw std::invalid_argument("permutation width must be at least 1");
}

Int BitPermutation::apply(const Int& x) const {
    if (x < 0 || (x >> width_) != 0)
        throw std::invalid_argument("permutation input outside [0, 2^width)");
    Int right = x & (pow2(right_bits_) - 1);
    Int left = x >> right_bits_;
    // Alternating unbalanced Feistel: XOR one half with a keyed function of
    // the other.  Each round is invertible, so the whole map is a bijection
    // for any width split (including left_bits_ == 0).
    for (unsigned r = 0; r < kRounds; ++r) {
        if (r % 2 == 0)
            left ^= round_value(key_, r, right, left_bits_);
        else
            right ^= round_value(key_, r, left, right_bits_);
    }
    return (left << right_bits_) | right;
}

Int permute_nonzero(const BitPermutation& perm, const Int& x) {
    if (x <= 0) throw std::invalid_argument("permute_nonzero needs x >= 1");
    Int y = perm.apply(x);
    while (y == 0) y = perm.apply(y);
    return y;
}

}  // namespace lintest
