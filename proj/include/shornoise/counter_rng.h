#pragma once

#include <cstdint>

namespace shornoise {

/// Stateless 64-bit mixer (SplitMix64 finalizer).
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based hash of (key, a, b). Every draw in the project is a pure
/// function of such a triple, so results never depend on evaluation order.
constexpr uint64_t counter_hash(uint64_t key, uint64_t a, uint64_t b = 0) {
  uint64_t h = mix64(key ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ (a * 0xd6e8feb86659fd93ULL));
  h = mix64(h ^ (b * 0xa0761d6478bd642fULL));
  return h;
}

/// Seed for sub-stream `index` of a master seed (per-trial tapes, per-sample draws).
constexpr uint64_t derive_seed(uint64_t master, uint64_t index) {
  return counter_hash(master, 0x7472696131ULL, index);
}

/// Uniform double in the open interval (0, 1) from a 64-bit word.
constexpr double to_unit_open(uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal quantile. Acklam's rational approximation refined by one
/// Halley step, which brings it to full double precision.
double inverse_normal_cdf(double p);

/// Sequential view over a counter stream: the n-th call returns
/// counter_hash(key, stream, n).
class CounterRng {
 public:
  explicit CounterRng(uint64_t key, uint64_t stream = 0) : key_(key), stream_(stream) {}

  uint64_t next_u64() { return counter_hash(key_, stream_, counter_++); }
  double uniform() { return to_unit_open(next_u64()); }
  double gaussian() { return inverse_normal_cdf(uniform()); }

  /// Uniform integer in [0, bound), bound >= 1. Rejection keeps it exact.
  uint64_t below(uint64_t bound);

  /// Uniform integer in [lo, hi].
  uint64_t between(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
  uint64_t stream_;
  uint64_t counter_ = 0;
};

}  // namespace shornoise
