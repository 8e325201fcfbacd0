#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/numtheory.h"

using namespace shornoise;

namespace {

// Trial division; independent of Pollard-Brent.
std::map<uint64_t, uint32_t> trial_factor(uint64_t n) {
  std::map<uint64_t, uint32_t> out;
  for (uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  if (n > 1) ++out[n];
  return out;
}

uint64_t brute_order(uint64_t x, uint64_t N) {
  uint64_t y = x % N, k = 1;
  while (y != 1 % N) {
    y = y * x % N;
    ++k;
  }
  return k;
}

// Continued fraction by the textbook Euclid recurrence, written out separately.
std::vector<std::pair<uint64_t, uint64_t>> oracle_convergents(uint64_t a, uint64_t b) {
  std::vector<std::pair<uint64_t, uint64_t>> out;
  uint64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  while (b != 0) {
    const uint64_t q = a / b;
    const uint64_t h = q * h1 + h0, k = q * k1 + k0;
    out.emplace_back(h, k);
    h0 = h1;
    h1 = h;
    k0 = k1;
    k1 = k;
    const uint64_t r = a % b;
    a = b;
    b = r;
  }
  return out;
}

}  // namespace

TEST_SUITE("numtheory") {
  TEST_CASE("factorize examples") {
    CHECK(factorize(1).factors.empty());
    CHECK(factorize(10).factors == std::vector<PrimePower>{{2, 1}, {5, 1}});
    CHECK(factorize(5040).factors == std::vector<PrimePower>{{2, 4}, {3, 2}, {5, 1}, {7, 1}});
    const uint64_t big = 18446744073709551557ULL;  // largest 64-bit prime
    CHECK(factorize(big).factors == std::vector<PrimePower>{{big, 1}});
    const uint64_t semi = 4294967291ULL * 4294967279ULL;
    CHECK(factorize(semi).factors == std::vector<PrimePower>{{4294967279ULL, 1}, {4294967291ULL, 1}});
  }

  TEST_CASE("is_prime examples") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(is_prime(1000000007ULL));
  }

  TEST_CASE("largest_prime_factor") {
    CHECK(largest_prime_factor(2) == 2);
    CHECK(largest_prime_factor(10) == 5);
    CHECK(largest_prime_factor(96) == 3);
    CHECK_THROWS_AS(largest_prime_factor(1), DomainError);
  }

  TEST_CASE("factorize, is_prime and largest_prime_factor agree up to 10^6") {
    PrimeSieve sieve(1000000);
    SpfSieve spf(1000000);
    uint64_t mismatches = 0;
    for (uint64_t n = 2; n <= 1000000; ++n) {
      const auto f = factorize(n);
      if (f.product() != n) ++mismatches;
      if (is_prime(n) != sieve.is_prime(n)) ++mismatches;
      if (is_prime(n) != (f.factors.size() == 1 && f.factors[0].exponent == 1)) ++mismatches;
      if (largest_prime_factor(n) != f.factors.back().prime) ++mismatches;
      if (!(spf.factorize(static_cast<uint32_t>(n)) == f)) ++mismatches;
      for (const auto& pp : f.factors)
        if (!sieve.is_prime(pp.prime)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("factorize matches trial division on random 40-bit values") {
    CounterRng rng(17);
    for (int i = 0; i < 300; ++i) {
      const uint64_t n = rng.between(2, uint64_t{1} << 40);
      std::map<uint64_t, uint32_t> got;
      for (const auto& pp : factorize(n).factors) got[pp.prime] = pp.exponent;
      CHECK(got == trial_factor(n));
    }
  }

  TEST_CASE("Fouvry property examples and exact comparison") {
    CHECK(has_fouvry_property(11));
    CHECK_FALSE(has_fouvry_property(13));
    CHECK_FALSE(has_fouvry_property(3));
    CHECK_THROWS_AS(has_fouvry_property(15), DomainError);
    CHECK_THROWS_AS(has_fouvry_property(2), DomainError);
    // Rational oracle: q^3 > p^2 with 128-bit integers for small p.
    PrimeSieve sieve(200000);
    for (uint64_t p : sieve.primes_in(3, 200000)) {
      const unsigned __int128 q = largest_prime_factor(p - 1);
      CHECK(has_fouvry_property(p) == (q * q * q > static_cast<unsigned __int128>(p) * p));
    }
  }

  TEST_CASE("fouvry_density against brute force") {
    const auto d10 = fouvry_density(10);
    CHECK(d10.primes == 4);
    CHECK(d10.qualifying == 0);
    for (uint64_t xmax : {100u, 1000u, 20000u}) {
      uint64_t primes = 0, hits = 0;
      for (uint64_t p = 2; p < xmax; ++p) {
        if (trial_factor(p).size() != 1 || trial_factor(p).begin()->second != 1) continue;
        ++primes;
        if (p == 2) continue;
        const uint64_t q = trial_factor(p - 1).rbegin()->first;
        if (q * q * q > p * p) ++hits;
      }
      const auto d = fouvry_density(xmax);
      CHECK(d.primes == primes);
      CHECK(d.qualifying == hits);
    }
  }

  TEST_CASE("multiplicative_order examples") {
    CHECK(multiplicative_order(1, 15, factorize(8)) == 1);
    CHECK(multiplicative_order(2, 15, factorize(8)) == 4);
    CHECK(multiplicative_order(2, 21, factorize(12)) == 6);
    CHECK_THROWS_AS(multiplicative_order(3, 15, factorize(8)), DomainError);
  }

  TEST_CASE("multiplicative_order equals brute force for N <= 1000") {
    uint64_t mismatches = 0;
    for (uint64_t N = 2; N <= 1000; ++N) {
      const auto phi = factorize(euler_phi(N));
      for (uint64_t x = 1; x < N; ++x) {
        if (std::gcd(x, N) != 1) continue;
        if (multiplicative_order(x, N, phi) != brute_order(x, N)) ++mismatches;
      }
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("order divides the group exponent of a semiprime") {
    CounterRng rng(3);
    PrimeSieve sieve(5000);
    const auto primes = sieve.primes_in(3, 5000);
    for (int i = 0; i < 200; ++i) {
      uint64_t p = primes[rng.below(primes.size())], q = primes[rng.below(primes.size())];
      if (p == q) continue;
      const uint64_t N = p * q;
      const uint64_t x = rng.between(2, N - 1);
      if (std::gcd(x, N) != 1) continue;
      const uint64_t w = multiplicative_order(x, N, totient_factorization_semiprime(p, q));
      CHECK(std::lcm(p - 1, q - 1) % w == 0);
    }
  }

  TEST_CASE("ord_r") {
    CHECK(ord_r(7, 2) == 0);
    CHECK(ord_r(12, 2) == 2);
    CHECK(ord_r(54, 3) == 3);
  }

  TEST_CASE("convergents") {
    CHECK(convergents(0, 256) == std::vector<Convergent>{{0, 1}});
    const auto c = convergents(76, 256);
    CHECK(std::find(c.begin(), c.end(), Convergent{3, 10}) != c.end());
    CHECK(c.back() == Convergent{19, 64});
    CHECK(convergents(64, 256) == std::vector<Convergent>{{0, 1}, {1, 4}});
    CHECK_THROWS_AS(convergents(1, 0), DomainError);
    CounterRng rng(9);
    for (int i = 0; i < 500; ++i) {
      const uint64_t den = rng.between(1, 1u << 30), num = rng.below(den + 1);
      const auto got = convergents(num, den);
      const auto want = oracle_convergents(num, den);
      REQUIRE(got.size() == want.size());
      for (size_t j = 0; j < got.size(); ++j) {
        CHECK(got[j].numerator == want[j].first);
        CHECK(got[j].denominator == want[j].second);
        CHECK(std::gcd(got[j].numerator, got[j].denominator) == 1);
      }
      const uint64_t g = std::gcd(num, den);
      CHECK(got.back() == Convergent{num / g, den / g});
    }
  }

  TEST_CASE("recover_period examples") {
    CHECK_FALSE(recover_period(0, 8, 15).has_value());
    CHECK(recover_period(64, 8, 15) == std::optional<uint64_t>{4});
    // (77, 8, 15): exhaustive scan of convergent denominators with the same acceptance test.
    std::optional<uint64_t> want;
    for (auto [h, k] : oracle_convergents(77, 256)) {
      if (k > 15) break;
      const __int128 diff = static_cast<__int128>(77) * k - static_cast<__int128>(h) * 256;
      if ((diff < 0 ? -diff : diff) * 32 <= static_cast<__int128>(256) * k) {
        want = k;
        break;
      }
    }
    CHECK(recover_period(77, 8, 15) == want);
  }

  TEST_CASE("recover_period returns omega / gcd(j, omega) on floor multiples") {
    const uint64_t N = 101;
    const unsigned n = 28;  // 2 ceil(log2 N^2)
    uint64_t bad = 0;
    for (uint64_t w = 1; w <= 100; ++w)
      for (uint64_t j = 1; j < w; ++j) {
        const uint64_t v = static_cast<uint64_t>((static_cast<unsigned __int128>(j) << n) / w);
        const auto got = recover_period(v, n, N);
        if (!got || *got != w / std::gcd(j, w)) ++bad;
      }
    CHECK(bad == 0);
  }

  TEST_CASE("sample_prime") {
    CounterRng rng(5);
    for (int i = 0; i < 50; ++i) {
      const uint64_t p = sample_prime(4, [](uint64_t) { return true; }, rng);
      CHECK((p == 11 || p == 13));
      CHECK(sample_prime(4, [](uint64_t q) { return q % 4 == 3; }, rng) == 11);
      const uint64_t f = sample_prime(5, [](uint64_t q) { return has_fouvry_property(q); }, rng);
      CHECK(has_fouvry_property(f));
      CHECK((f >= 16 && f < 32));
    }
    CHECK_THROWS_AS(sample_prime(4, [](uint64_t) { return false; }, rng), SamplingExhausted);
    CounterRng a(77), b(77);
    CHECK(sample_prime(20, [](uint64_t) { return true; }, a) == sample_prime(20, [](uint64_t) { return true; }, b));
  }

  TEST_CASE("phi_table and euler_phi") {
    const auto phi = phi_table(10000);
    for (uint64_t n = 1; n <= 10000; ++n) {
      uint64_t count = 0;
      if (n <= 2000)
        for (uint64_t k = 1; k <= n; ++k) count += std::gcd(k, n) == 1;
      else
        count = phi[n];
      CHECK(phi[n] == count);
      CHECK(euler_phi(n) == phi[n]);
    }
  }
}
