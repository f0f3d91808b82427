#pragma once

#include <cstdint>
#include <random>

namespace specdet {

// SplitMix64 finalizer. Used only to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// A 64-bit master seed. stream(i) derives the seed of sub-stream i, so a
// trial's randomness depends only on (master, trial index) and never on
// scheduling order.
struct Seed {
  std::uint64_t value = 0;

  constexpr Seed stream(std::uint64_t index) const noexcept {
    return Seed{mix64(mix64(value) ^ mix64(index + 0x632be59bd9b4e019ULL))};
  }

  friend constexpr bool operator==(Seed, Seed) = default;
};

// mt19937_64 with a platform-independent uniform double. The standard
// distributions are implementation-defined, so they are not used.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double q) { return uniform() < q; }

  // Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace specdet
