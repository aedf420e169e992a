#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace wpl {

/// Philox4x32 counter-based block function with 10 rounds (Salmon et al.,
/// "Parallel random numbers: as easy as 1, 2, 3", SC 2011).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Independent random stream identified by (seed, stream id). The seed is the
/// Philox key; the counter holds the stream id in its upper half and a block
/// index in its lower half, so streams never overlap and any stream can be
/// regenerated without touching the others.
///
/// Satisfies UniformRandomBitGenerator.
class CounterStream {
  public:
    using result_type = std::uint64_t;

    CounterStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            refill();
        }
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    result_type operator()() { return next_u64(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    /// Uniform double in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound), Lemire's multiply-and-reject method.
    std::uint32_t bounded(std::uint32_t bound) {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
            while (low < threshold) {
                m = static_cast<std::uint64_t>(next_u32()) * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::uint64_t blocks_consumed() const { return block_; }

  private:
    void refill() {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                      static_cast<std::uint32_t>(stream_id_),
                                      static_cast<std::uint32_t>(stream_id_ >> 32)};
        buffer_ = Philox4x32::apply(ctr, key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    unsigned pos_ = 4;
};

}  // namespace wpl
