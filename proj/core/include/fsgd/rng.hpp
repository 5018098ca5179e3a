// Counter-based pseudo random numbers (Philox4x32-10).
//
// Every (seed, stream, substream) triple addresses an independent sequence,
// so parallel replications draw from disjoint streams and results do not
// depend on thread scheduling.

#pragma once

#include <array>
#include <cstdint>

namespace fsgd {

class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0,
                  std::uint64_t substream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_{static_cast<std::uint32_t>(stream)},
        substream_{static_cast<std::uint32_t>(substream)} {}

  // One keyed block of the Philox4x32-10 function. Exposed so tests can
  // check the published known-answer vectors.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) noexcept {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t m0 = 0xD2511F53ull * ctr[0];
      const std::uint64_t m1 = 0xCD9E8D57ull * ctr[2];
      ctr = {static_cast<std::uint32_t>(m1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(m1),
             static_cast<std::uint32_t>(m0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(m0)};
    }
    return ctr;
  }

  std::uint64_t next_u64() noexcept {
    if (lane_ >= 4) {
      buf_ = block({static_cast<std::uint32_t>(block_),
                    static_cast<std::uint32_t>(block_ >> 32), stream_, substream_},
                   key_);
      ++block_;
      lane_ = 0;
    }
    const std::uint64_t lo = buf_[lane_];
    const std::uint64_t hi = buf_[lane_ + 1];
    lane_ += 2;
    return lo | (hi << 32);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Uniform on [-halfwidth, halfwidth]; support never exceeds the bounds.
  double symmetric(double halfwidth) noexcept { return halfwidth * (2.0 * uniform01() - 1.0); }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint32_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int lane_ = 4;
};

}  // namespace fsgd
