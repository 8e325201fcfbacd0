#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "shornoise/counter_rng.h"

namespace shornoise {

struct PrimePower {
  uint64_t prime;
  uint32_t exponent;
  bool operator==(const PrimePower&) const = default;
};

/// value = prod prime^exponent, primes strictly increasing.
struct Factorization {
  uint64_t value = 1;
  std::vector<PrimePower> factors;

  /// Product of the prime powers; equals `value` for a valid factorization.
  unsigned __int128 product() const;
  /// Merge with another factorization (value becomes the product).
  Factorization times(const Factorization& other) const;
  bool operator==(const Factorization&) const = default;
};

struct Convergent {
  uint64_t numerator;
  uint64_t denominator;
  bool operator==(const Convergent&) const = default;
};

uint64_t gcd_u64(uint64_t a, uint64_t b);
uint64_t lcm_u64(uint64_t a, uint64_t b);
uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(uint64_t n);

/// Trial division by small primes, then Pollard-Brent rho on the cofactor.
/// Deterministic: rho parameters are fixed sequences.
Factorization factorize(uint64_t n);

/// P+(m), the largest prime factor. Throws DomainError for m < 2.
uint64_t largest_prime_factor(uint64_t m);

/// P+(p-1) > p^(2/3), decided by the exact integer test P+(p-1)^3 > p^2.
/// Throws DomainError unless p is an odd prime.
bool has_fouvry_property(uint64_t p);

struct FouvryDensity {
  uint64_t qualifying = 0;
  uint64_t primes = 0;
  double ratio() const { return primes == 0 ? 0.0 : static_cast<double>(qualifying) / primes; }
};

/// Fraction of primes p < x_max with the Fouvry property. The prime 2 is
/// counted in the denominator and never qualifies.
FouvryDensity fouvry_density(uint64_t x_max);

/// Least w >= 1 with x^w == 1 mod modulus, found by descending through the
/// divisors of a known multiple of the group exponent.
uint64_t multiplicative_order(uint64_t x, uint64_t modulus, const Factorization& exponent_multiple);

/// Largest e with r^e | m.
uint32_t ord_r(uint64_t m, uint64_t r);

/// phi(N) for N = p q with distinct primes, as a factorization of (p-1)(q-1).
Factorization totient_factorization_semiprime(uint64_t p, uint64_t q);
uint64_t euler_phi(uint64_t n);

/// All convergents of numerator/denominator, in order.
std::vector<Convergent> convergents(uint64_t numerator, uint64_t denominator);

/// Continued-fraction post-processing of a measurement outcome v in [0, 2^n):
/// the smallest convergent denominator d <= N whose convergent c/d satisfies
/// |v/2^n - c/d| <= 1/2^(floor(n/2)+1). Absent for v = 0 or on failure.
std::optional<uint64_t> recover_period(uint64_t v, unsigned n, uint64_t N);

using PrimePredicate = std::function<bool(uint64_t)>;

/// Uniform over the primes in [2^(m-1), 2^m - 1] satisfying `predicate`,
/// by rejection sampling. Throws SamplingExhausted after 10^6 draws.
uint64_t sample_prime(unsigned m_bits, const PrimePredicate& predicate, CounterRng& rng);

inline constexpr uint64_t kSamplePrimeRetryCap = 1'000'000;

/// Byte-per-entry sieve of Eratosthenes on [0, limit].
class PrimeSieve {
 public:
  explicit PrimeSieve(uint64_t limit);
  bool is_prime(uint64_t n) const { return n <= limit_ && composite_[n] == 0; }
  uint64_t limit() const { return limit_; }
  /// Primes in [lo, hi], ascending.
  std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) const;

 private:
  uint64_t limit_;
  std::vector<uint8_t> composite_;
};

/// Smallest-prime-factor table on [0, limit]; factorizes any n <= limit in O(log n).
class SpfSieve {
 public:
  explicit SpfSieve(uint32_t limit);
  Factorization factorize(uint32_t n) const;
  uint32_t largest_prime_factor(uint32_t n) const;
  bool is_prime(uint32_t n) const { return n >= 2 && spf_[n] == n; }
  uint32_t limit() const { return limit_; }

 private:
  uint32_t limit_;
  std::vector<uint32_t> spf_;
};

/// Euler phi for every d in [0, limit].
std::vector<uint32_t> phi_table(uint32_t limit);

}  // namespace shornoise
