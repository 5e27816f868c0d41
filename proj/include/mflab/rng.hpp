#pragma once

#include <array>
#include <cstdint>

namespace mflab {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); used as a counter-based generator.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Independent substream keyed by (run seed, path index). Draw j of the
/// stream is a pure function of (seed, path, j), so results do not depend
/// on which thread evaluates which path.
class StreamRng {
public:
  StreamRng(std::uint64_t seed, std::uint64_t path_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_(path_index) {}

  std::uint64_t next_u64() {
    if (used_ == 2) refill();
    const std::uint64_t out = (std::uint64_t{block_[2 * used_]} << 32) | block_[2 * used_ + 1];
    ++used_;
    return out;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
  void refill() {
    block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                            static_cast<std::uint32_t>(counter_ >> 32),
                            static_cast<std::uint32_t>(path_),
                            static_cast<std::uint32_t>(path_ >> 32)},
                           key_);
    ++counter_;
    used_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 2;
};

}  // namespace mflab
