#include "shornoise/numtheory.h"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <numeric>
#include <string>

#include "shornoise/errors.h"

namespace shornoise {

namespace {

using u128 = unsigned __int128;

bool miller_rabin_witness(uint64_t n, uint64_t a, uint64_t d, int s) {
  uint64_t x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

uint64_t pollard_brent(uint64_t n, uint64_t c) {
  if (n % 2 == 0) return 2;
  auto f = [&](uint64_t y) { return (mul_mod(y, y, n) + c) % n; };
  uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
  constexpr uint64_t block = 128;
  for (uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (uint64_t i = 0; i < r; ++i) y = f(y);
    for (uint64_t k = 0; k < r && g == 1; k += block) {
      ys = y;
      for (uint64_t i = 0; i < std::min(block, r - k); ++i) {
        y = f(y);
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u64(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_u64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split_into(uint64_t n, std::map<uint64_t, uint32_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (uint64_t c = 1;; ++c) {
    uint64_t d = pollard_brent(n, c);
    if (d != n && d != 1) {
      split_into(d, out);
      split_into(n / d, out);
      return;
    }
  }
}

}  // namespace

unsigned __int128 Factorization::product() const {
  u128 acc = 1;
  for (const auto& f : factors)
    for (uint32_t e = 0; e < f.exponent; ++e) acc *= f.prime;
  return acc;
}

Factorization Factorization::times(const Factorization& other) const {
  std::map<uint64_t, uint32_t> merged;
  for (const auto& f : factors) merged[f.prime] += f.exponent;
  for (const auto& f : other.factors) merged[f.prime] += f.exponent;
  Factorization out;
  out.value = value * other.value;
  for (auto [p, e] : merged) out.factors.push_back({p, e});
  return out;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

uint64_t lcm_u64(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_u64(a, b) * b;
}

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  if (m == 1) return 0;
  uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  static constexpr uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (uint64_t p : small) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is exact below 3.3e24.
  for (uint64_t a : small) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  Factorization out;
  out.value = n;
  std::map<uint64_t, uint32_t> found;
  uint64_t rest = n;
  for (uint64_t p = 2; p < 1000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      ++found[p];
      rest /= p;
    }
  }
  split_into(rest, found);
  for (auto [p, e] : found) out.factors.push_back({p, e});
  return out;
}

uint64_t largest_prime_factor(uint64_t m) {
  if (m < 2) throw DomainError("largest_prime_factor: m must be >= 2, got " + std::to_string(m));
  return factorize(m).factors.back().prime;
}

bool has_fouvry_property(uint64_t p) {
  if (p < 3 || !is_prime(p)) throw DomainError("has_fouvry_property: " + std::to_string(p) + " is not an odd prime");
  using boost::multiprecision::uint256_t;
  uint256_t q = largest_prime_factor(p - 1);
  uint256_t pp = p;
  return q * q * q > pp * pp;
}

FouvryDensity fouvry_density(uint64_t x_max) {
  FouvryDensity out;
  if (x_max <= 2) return out;
  SpfSieve sieve(static_cast<uint32_t>(x_max - 1));
  for (uint32_t p = 2; p < x_max; ++p) {
    if (!sieve.is_prime(p)) continue;
    ++out.primes;
    if (p == 2) continue;
    uint64_t q = sieve.largest_prime_factor(p - 1);
    if (static_cast<u128>(q) * q * q > static_cast<u128>(p) * p) ++out.qualifying;
  }
  return out;
}

uint64_t multiplicative_order(uint64_t x, uint64_t modulus, const Factorization& exponent_multiple) {
  if (modulus == 0) throw DomainError("multiplicative_order: modulus must be positive");
  if (modulus == 1) return 1;
  x %= modulus;
  if (gcd_u64(x, modulus) != 1)
    throw DomainError("multiplicative_order: gcd(" + std::to_string(x) + ", " + std::to_string(modulus) + ") != 1");
  uint64_t order = exponent_multiple.value;
  if (pow_mod(x, order, modulus) != 1)
    throw DomainError("multiplicative_order: supplied exponent is not a multiple of the order");
  for (const auto& f : exponent_multiple.factors) {
    for (uint32_t e = 0; e < f.exponent && order % f.prime == 0; ++e) {
      if (pow_mod(x, order / f.prime, modulus) != 1) break;
      order /= f.prime;
    }
  }
  return order;
}

uint32_t ord_r(uint64_t m, uint64_t r) {
  if (m == 0 || r < 2) throw DomainError("ord_r: need m >= 1 and r >= 2");
  uint32_t e = 0;
  while (m % r == 0) {
    m /= r;
    ++e;
  }
  return e;
}

Factorization totient_factorization_semiprime(uint64_t p, uint64_t q) {
  return factorize(p - 1).times(factorize(q - 1));
}

uint64_t euler_phi(uint64_t n) {
  if (n == 0) throw DomainError("euler_phi: n must be >= 1");
  uint64_t phi = n;
  for (const auto& f : factorize(n).factors) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

std::vector<Convergent> convergents(uint64_t numerator, uint64_t denominator) {
  if (denominator == 0) throw DomainError("convergents: denominator must be positive");
  std::vector<Convergent> out;
  // h_{-1}=1, h_{-2}=0; k_{-1}=0, k_{-2}=1.
  u128 h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  uint64_t a = numerator, b = denominator;
  while (b != 0) {
    uint64_t q = a / b;
    u128 h = q * h1 + h2;
    u128 k = q * k1 + k2;
    out.push_back({static_cast<uint64_t>(h), static_cast<uint64_t>(k)});
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    uint64_t r = a % b;
    a = b;
    b = r;
  }
  return out;
}

std::optional<uint64_t> recover_period(uint64_t v, unsigned n, uint64_t N) {
  if (n == 0 || n > 62) throw DomainError("recover_period: n must be in [1, 62]");
  const uint64_t q = uint64_t{1} << n;
  if (v >= q) throw DomainError("recover_period: v must be < 2^n");
  if (v == 0) return std::nullopt;
  const unsigned h = n / 2 + 1;
  for (const auto& c : convergents(v, q)) {
    if (c.denominator > N) break;
    // |v/2^n - c/d| <= 2^-h  <=>  |v d - c 2^n| <= 2^(n-h) d
    u128 lhs_a = static_cast<u128>(v) * c.denominator;
    u128 lhs_b = static_cast<u128>(c.numerator) * q;
    u128 diff = lhs_a > lhs_b ? lhs_a - lhs_b : lhs_b - lhs_a;
    u128 rhs = (static_cast<u128>(1) << (n - h)) * c.denominator;
    if (diff <= rhs) return c.denominator;
  }
  return std::nullopt;
}

uint64_t sample_prime(unsigned m_bits, const PrimePredicate& predicate, CounterRng& rng) {
  if (m_bits < 3 || m_bits > 63) throw DomainError("sample_prime: m_bits must be in [3, 63]");
  const uint64_t lo = uint64_t{1} << (m_bits - 1);
  const uint64_t hi = (uint64_t{1} << m_bits) - 1;
  for (uint64_t attempt = 0; attempt < kSamplePrimeRetryCap; ++attempt) {
    uint64_t candidate = rng.between(lo, hi);
    if (is_prime(candidate) && predicate(candidate)) return candidate;
  }
  throw SamplingExhausted("sample_prime: no satisfying " + std::to_string(m_bits) + "-bit prime after " +
                          std::to_string(kSamplePrimeRetryCap) + " draws");
}

PrimeSieve::PrimeSieve(uint64_t limit) : limit_(limit), composite_(limit + 1, 0) {
  composite_[0] = 1;
  if (limit >= 1) composite_[1] = 1;
  for (uint64_t i = 2; i * i <= limit; ++i) {
    if (composite_[i]) continue;
    for (uint64_t j = i * i; j <= limit; j += i) composite_[j] = 1;
  }
}

std::vector<uint64_t> PrimeSieve::primes_in(uint64_t lo, uint64_t hi) const {
  std::vector<uint64_t> out;
  hi = std::min(hi, limit_);
  for (uint64_t n = lo; n <= hi; ++n)
    if (composite_[n] == 0) out.push_back(n);
  return out;
}

SpfSieve::SpfSieve(uint32_t limit) : limit_(limit), spf_(static_cast<size_t>(limit) + 1, 0) {
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (uint64_t j = i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<uint32_t>(i);
  }
}

Factorization SpfSieve::factorize(uint32_t n) const {
  if (n == 0 || n > limit_) throw DomainError("SpfSieve::factorize: out of range");
  Factorization out;
  out.value = n;
  while (n > 1) {
    uint32_t p = spf_[n];
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  return out;
}

uint32_t SpfSieve::largest_prime_factor(uint32_t n) const {
  if (n < 2 || n > limit_) throw DomainError("SpfSieve::largest_prime_factor: out of range");
  uint32_t largest = 0;
  while (n > 1) {
    largest = spf_[n];
    n /= spf_[n];
  }
  return largest;
}

std::vector<uint32_t> phi_table(uint32_t limit) {
  std::vector<uint32_t> phi(static_cast<size_t>(limit) + 1);
  std::iota(phi.begin(), phi.end(), 0u);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (phi[i] != i) continue;
    for (uint64_t j = i; j <= limit; j += i) phi[j] -= phi[j] / static_cast<uint32_t>(i);
  }
  return phi;
}

}  // namespace shornoise
