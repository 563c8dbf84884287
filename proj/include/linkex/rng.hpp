#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace linkex {

// SplitMix64 stream. Small state, no warmup, good enough statistics for
// simulation sampling. Every random decision in the protocols runs off a
// stream derived from (master seed, purpose tag, ids...) so results are
// independent of iteration and scheduling order.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) via Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      std::uint64_t x = next();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= static_cast<std::uint64_t>(-bound) % bound)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  double unit() { return (next() >> 11) * 0x1.0p-53; }

  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

 private:
  std::uint64_t state_;
};

namespace stream {
// Purpose tags for derived streams.
inline constexpr std::uint64_t kInitFakes = 1;
inline constexpr std::uint64_t kInitFakesStage2 = 2;
inline constexpr std::uint64_t kMessage = 3;
inline constexpr std::uint64_t kErase = 4;
inline constexpr std::uint64_t kTieBreak = 5;
inline constexpr std::uint64_t kGraphGen = 6;
inline constexpr std::uint64_t kMetricsSample = 7;
inline constexpr std::uint64_t kRandomAttack = 8;
inline constexpr std::uint64_t kHashSeed = 9;
}  // namespace stream

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Stream key derivation: fold each part into the running hash.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
  h = mix64(h ^ (tag * 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (a * 0xd6e8feb86659fd93ULL));
  h = mix64(h ^ (b * 0xa0761d6478bd642fULL));
  h = mix64(h ^ (c * 0xe7037ed1a0b428dbULL));
  return h;
}

inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t tag,
                                std::uint64_t a = 0, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
  return SplitMix64(derive_seed(seed, tag, a, b, c));
}

// Fractional counts round to nearest with ties to even; used where a share
// like alpha*|L| must become an integer.
inline std::uint64_t round_count(double x) {
  double f = std::floor(x);
  double frac = x - f;
  auto base = static_cast<std::uint64_t>(f);
  if (frac > 0.5) return base + 1;
  if (frac < 0.5) return base;
  return base % 2 == 0 ? base : base + 1;
}

// Error-diffusion rounding for per-node budgets like beta*d_u: each count is
// within one link of its target and the running total stays within half a
// link of the exact mass, whatever the degree distribution. Per-node
// rounding alone cannot do that (a modal odd degree skews the total), and
// the fake-link mass directly sets the converged true/fake ratio.
class BudgetRounder {
 public:
  std::uint64_t next(double target) {
    double x = target + acc_;
    std::uint64_t k = x <= 0.0 ? 0 : round_count(x);
    acc_ = x - static_cast<double>(k);
    return k;
  }

 private:
  double acc_ = 0.0;
};

// Partial Fisher-Yates: after the call pool[0..take) is a uniform sample
// without replacement. Both the bitset simulator and the clear-form oracle
// call this with the pool in ascending order, which pins the draws.
inline void partial_shuffle(std::vector<std::uint32_t>& pool, std::size_t take,
                            SplitMix64& rng) {
  if (take > pool.size()) take = pool.size();
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace linkex
