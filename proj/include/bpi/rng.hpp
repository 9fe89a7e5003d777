#pragma once

#include <array>
#include <cstdint>

namespace bpi {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

/// SplitMix64 finalizer; derives independent seeds for rows of a scan.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + index + 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based stream identified by (seed, path, generation). Any draw is addressable
/// without replaying earlier ones: draw i lives in block i / 2.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t path, std::uint32_t generation)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_(path),
        generation_(generation) {}

  std::uint64_t next_u64() {
    if (buffered_ == 0) {
      block_ = philox4x32({static_cast<std::uint32_t>(block_index_), generation_,
                           static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                          key_);
      ++block_index_;
      buffered_ = 2;
    }
    const int slot = 2 - buffered_--;
    return (std::uint64_t{block_[2 * slot]} << 32) | block_[2 * slot + 1];
  }

  // UniformRandomBitGenerator interface, for the standard distributions
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t draws_consumed() const { return 2 * block_index_ - buffered_; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint32_t generation_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int buffered_ = 0;
};

}  // namespace bpi
