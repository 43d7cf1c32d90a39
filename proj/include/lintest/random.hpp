#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lintest/ints.hpp"

namespace lintest {

// SplitMix64 finalizer; used for seed derivation and the bit-permutation
// round function.  Fixed constants, stable across platforms.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic per-index child seed.  Every randomized component takes an
// explicit seed and derives sub-seeds through this, so whole campaigns replay
// bit-for-bit regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// A stream of random bits with an explicit accounting of how many bits each
// consumer takes.  Samplers draw exactly the number of bits they advertise,
// which keeps runs reproducible and lets tests script the stream.
//
// Bits come LSB-first out of successive 64-bit words: a fresh stream's
// take_bits(k) returns the low k bits of the first word.  The scripted
// variant replays a fixed word list and throws std::out_of_range when it
// runs dry (useful for exhaustive enumeration in tests).
class BitStream {
public:
    explicit BitStream(std::uint64_t seed);

    static BitStream scripted(std::vector<std::uint64_t> words);

    // count <= 64; count == 0 returns 0 and consumes nothing.
    std::uint64_t take_bits64(unsigned count);

    // Arbitrary width, assembled from 64-bit chunks, low chunk first.
    Int take_bits(unsigned count);

    // Independent child stream (seeded streams only).
    BitStream spawn(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    bool is_scripted() const { return scripted_; }

private:
    BitStream() = default;
    std::uint64_t next_word();

    std::uint64_t seed_ = 0;
    bool scripted_ = false;
    std::mt19937_64 engine_;
    std::vector<std::uint64_t> script_;
    std::size_t script_pos_ = 0;
    std::uint64_t buffer_ = 0;
    unsigned buffered_ = 0;
};

}  // namespace lintest
