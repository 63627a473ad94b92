#pragma once

#include <array>
#include <cstdint>

namespace walkarith {

// Philox4x32-10 (Salmon et al., SC'11). Key = 64-bit seed, counter word 3
// carries the stream id, words 0..2 the block index.
class philox4x32 {
public:
    using result_type = uint64_t;

    philox4x32(uint64_t seed, uint32_t stream = 0)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)}, stream_(stream) {}

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
        constexpr uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = static_cast<uint64_t>(m0) * ctr[0];
            const uint64_t p1 = static_cast<uint64_t>(m1) * ctr[2];
            ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<uint32_t>(p1),
                   static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<uint32_t>(p0)};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

    uint64_t operator()() {
        if (pos_ == 2) refill();
        const uint64_t v = (static_cast<uint64_t>(buf_[2 * pos_ + 1]) << 32) | buf_[2 * pos_];
        ++pos_;
        return v;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~uint64_t{0}; }

private:
    void refill() {
        buf_ = block({static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32), 0u, stream_}, key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<uint32_t, 2> key_;
    uint32_t stream_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 2;
};

}  // namespace walkarith
