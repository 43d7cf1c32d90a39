#include "lintest/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace lintest {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // Hash the seed before mixing in the index, so the function is not
    // symmetric in its arguments (a plain seed ^ index would make e.g.
    // (1, 2) and (2, 1) collide).
    return splitmix64(splitmix64(seed) ^ index);
}

BitStream::BitStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

BitStream BitStream::scripted(std::vector<std::uint64_t> words) {
    BitStream s;
    s.scripted_ = true;
    s.script_ = std::move(words);
    return s;
}

std::uint64_t BitStream::next_word() {
    if (scripted_) {
        if (script_pos_ >= script_.size())
            throw std::out_of_range("scripted bit stream exhausted");
        return script_[script_pos_++];
    }
    return engine_();
}

std::uint64_t BitStream::take_bits64(unsigned count) {
    if (count == 0) return 0;
    if (count > 64) throw std::invalid_argument("take_bits64: count > 64");
    std::uint64_t out = 0;
    unsigned got = 0;
    while (got < count) {
        if (buffered_ == 0) {
            buffer_ = next_word();
            buffered_ = 64;
        }
        unsigned take = std::min(count - got, buffered_);
        std::uint64_t mask = take == 64 ? ~0ULL : ((1ULL << take) - 1);
        out |= (buffer_ & mask) << got;
        buffer_ = take == 64 ? 0 : buffer_ >> take;
        buffered_ -= take;
        got += take;
    }
    return out;
}

Int BitStream::take_bits(unsigned count) {
    if (count <= 64) return Int(take_bits64(count));
    Int out = 0;
    unsigned pos = 0;
    while (pos < count) {
        unsigned chunk = std::min(64U, count - pos);
        out |= Int(take_bits64(chunk)) << pos;
        pos += chunk;
    }
    return out;
}

BitStream BitStream::spawn(std::uint64_t index) const {
    if (scripted_)
        throw std::logic_error("cannot spawn from a scripted bit stream");
    return BitStream(derive_seed(seed_, index));
}

}  // namespace lintest
