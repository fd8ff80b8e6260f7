#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mod5 {

// All randomness in the project flows through this engine so that results are
// reproducible across platforms (std::shuffle and the std distributions are
// implementation-defined; these are not).
inline constexpr const char* kPrngName = "mt19937_64";
inline constexpr const char* kSeedScheme =
    "trial seed = splitmix64(master + 0x9E3779B97F4A7C15 * (trial + 1))";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent per-trial streams from one master seed.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (trial + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mod5
