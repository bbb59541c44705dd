#pragma once

// Counter-based RNG: Philox4x64-10 with per-sample substreams. The key is
// (seed, stream id) and the counter is a block index, so any partition of
// sample indices across workers reproduces the same draws.

#include <array>
#include <cmath>
#include <cstdint>

namespace wishartsum::rng {

namespace philox_detail {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace philox_detail

/// One 256-bit Philox4x64-10 block.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
  using namespace philox_detail;
  for (int round = 0;; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round == 9) return ctr;
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
}

/// Standard-normal stream for one (seed, stream) pair; each counter block
/// yields four variates via Box-Muller.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  double next() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

 private:
  static double to_unit(std::uint64_t x) {
    // (0, 1]: the +1 keeps log() finite
    return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
  }

  void refill() {
    auto words = philox4x64({block_++, 0, 0, 0}, key_);
    for (int i = 0; i < 2; ++i) {
      double u1 = to_unit(words[2 * i]);
      double u2 = to_unit(words[2 * i + 1]);
      double r = std::sqrt(-2.0 * std::log(u1));
      buf_[2 * i] = r * std::cos(2.0 * M_PI * u2);
      buf_[2 * i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    pos_ = 0;
  }

  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<double, 4> buf_{};
  int pos_ = 4;
};

}  // namespace wishartsum::rng
