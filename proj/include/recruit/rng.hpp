#pragma once

#include <cstdint>

namespace recruit {

// SplitMix64 stream. One independently-seeded stream per Monte Carlo trial
// makes results reproducible and independent of how trials are scheduled.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Derives the seed of a substream (e.g. per trial) from a base seed.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632BE59BD9B4E019ULL + 0x9E3779B97F4A7C15ULL * index));
    return g.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace recruit
