#include "shornoise/appendix_stats.h"

#include <cmath>
#include <string>

#include "shornoise/errors.h"

namespace shornoise {

namespace {

using u128 = unsigned __int128;

SurveyRow make_row(double threshold, uint64_t hits, uint64_t samples) {
  SurveyRow row;
  row.threshold = threshold;
  row.samples = samples;
  row.probability = samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
  row.std_error = samples == 0 ? 0.0 : std::sqrt(row.probability * (1 - row.probability) / static_cast<double>(samples));
  return row;
}

uint64_t random_unit(uint64_t modulus, CounterRng& rng) {
  while (true) {
    uint64_t g = rng.between(1, modulus - 1);
    if (gcd_u64(g, modulus) == 1) return g;
  }
}

void check_survey_args(unsigned m_bits, uint64_t samples) {
  if (m_bits < 8 || m_bits > 24) throw DomainError("survey: m_bits must be in [8, 24]");
  if (samples < 100) throw DomainError("survey: samples must be >= 100");
}

}  // namespace

MBitPrimes::MBitPrimes(unsigned m_bits) : bits_(m_bits) {
  if (m_bits < 3 || m_bits > 24) throw DomainError("MBitPrimes: m_bits must be in [3, 24]");
  const uint64_t hi = (uint64_t{1} << m_bits) - 1;
  PrimeSieve sieve(hi);
  primes_ = sieve.primes_in(uint64_t{1} << (m_bits - 1), hi);
}

PrimePairSample sample_prime_pair(const MBitPrimes& primes, CounterRng& rng) {
  if (primes.primes().size() < 2) throw DomainError("sample_prime_pair: need at least two m-bit primes");
  PrimePairSample s;
  s.p = primes.sample(rng);
  do {
    s.q = primes.sample(rng);
  } while (s.q == s.p);
  s.N = s.p * s.q;
  s.phi = (s.p - 1) * (s.q - 1);
  s.gcd_pm1 = gcd_u64(s.p - 1, s.q - 1);
  s.group_exponent = lcm_u64(s.p - 1, s.q - 1);
  return s;
}

SurveyTable order_ratio_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& A_values,
                               uint64_t seed) {
  check_survey_args(m_bits, samples);
  const MBitPrimes primes(m_bits);
  std::vector<uint64_t> hits(A_values.size(), 0);
  SurveyTable table;
  for (uint64_t i = 0; i < samples; ++i) {
    CounterRng rng(derive_seed(seed, i));
    const auto s = sample_prime_pair(primes, rng);
    const uint64_t g = random_unit(s.N, rng);
    const Factorization fp = factorize(s.p - 1), fq = factorize(s.q - 1);
    const uint64_t order_n = multiplicative_order(g, s.N, fp.times(fq));
    const uint64_t order_p = multiplicative_order(g % s.p, s.p, fp);
    const uint64_t order_q = multiplicative_order(g % s.q, s.q, fq);
    const uint64_t a = (s.p - 1) / order_p, b = (s.q - 1) / order_q;

    table.identity_checks += 3;
    if (order_n != lcm_u64(order_p, order_q)) ++table.identity_failures;
    if (s.group_exponent != s.phi / s.gcd_pm1) ++table.identity_failures;
    if (static_cast<u128>(order_n) * a * b < s.group_exponent) ++table.identity_failures;

    for (size_t k = 0; k < A_values.size(); ++k)
      if (static_cast<u128>(order_n) * A_values[k] < s.phi) ++hits[k];
  }
  for (size_t k = 0; k < A_values.size(); ++k)
    table.rows.push_back(make_row(static_cast<double>(A_values[k]), hits[k], samples));
  return table;
}

SurveyTable gcd_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& A1_values, uint64_t seed) {
  check_survey_args(m_bits, samples);
  const MBitPrimes primes(m_bits);
  std::vector<uint64_t> hits(A1_values.size(), 0);
  SurveyTable table;
  for (uint64_t i = 0; i < samples; ++i) {
    CounterRng rng(derive_seed(seed, i));
    const auto s = sample_prime_pair(primes, rng);
    for (size_t k = 0; k < A1_values.size(); ++k) {
      const bool by_gcd = s.gcd_pm1 > A1_values[k];
      const bool by_exponent = static_cast<u128>(s.group_exponent) * A1_values[k] < s.phi;
      ++table.identity_checks;
      if (by_gcd != by_exponent) ++table.identity_failures;
      if (by_gcd) ++hits[k];
    }
  }
  for (size_t k = 0; k < A1_values.size(); ++k)
    table.rows.push_back(make_row(static_cast<double>(A1_values[k]), hits[k], samples));
  return table;
}

SurveyTable per_prime_order_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& B_values,
                                   uint64_t seed) {
  check_survey_args(m_bits, samples);
  const MBitPrimes primes(m_bits);
  std::vector<uint64_t> hits(B_values.size(), 0);
  SurveyTable table;
  for (uint64_t i = 0; i < samples; ++i) {
    CounterRng rng(derive_seed(seed, i));
    const uint64_t p = primes.sample(rng);
    const uint64_t g = rng.between(1, p - 1);
    const uint64_t order = multiplicative_order(g, p, factorize(p - 1));
    ++table.identity_checks;
    if ((p - 1) % order != 0) ++table.identity_failures;
    for (size_t k = 0; k < B_values.size(); ++k)
      if (static_cast<u128>(order) * B_values[k] < p - 1) ++hits[k];
  }
  for (size_t k = 0; k < B_values.size(); ++k)
    table.rows.push_back(make_row(static_cast<double>(B_values[k]), hits[k], samples));
  return table;
}

std::vector<Ord2TailRow> ord2_tail_survey(unsigned m_bits, const std::vector<unsigned>& e_values) {
  const MBitPrimes primes(m_bits);
  const auto& list = primes.primes();
  const double X = std::ldexp(1.0, static_cast<int>(m_bits)) - 1;
  std::vector<Ord2TailRow> rows;
  for (unsigned e : e_values) {
    if (e < 1) throw DomainError("ord2_tail_survey: e must be >= 1");
    Ord2TailRow row;
    row.e = e;
    row.primes = list.size();
    for (uint64_t p : list)
      if (ord_r(p - 1, 2) >= e) ++row.hits;
    row.probability = static_cast<double>(row.hits) / static_cast<double>(row.primes);
    row.reference = std::ldexp(1.0, 1 - static_cast<int>(e));
    const double two_e = std::ldexp(1.0, static_cast<int>(e));
    row.bt_estimate = two_e < X ? 2 * X / (two_e / 2 * std::log(X / two_e)) / static_cast<double>(row.primes) : 1.0;
    rows.push_back(row);
  }
  return rows;
}

uint64_t prime_count_ap(const PrimeSieve& sieve, uint64_t x, uint64_t d, uint64_t a) {
  if (d == 0 || d >= x) throw DomainError("prime_count_ap: need 1 <= d < x");
  if (gcd_u64(a % d, d) != 1) throw DomainError("prime_count_ap: gcd(a, d) must be 1");
  if (sieve.limit() < x) throw DomainError("prime_count_ap: sieve does not cover x");
  uint64_t count = 0;
  for (uint64_t p = a % d; p <= x; p += d)
    if (sieve.is_prime(p)) ++count;
  return count;
}

uint64_t prime_count_ap(uint64_t x, uint64_t d, uint64_t a) { return prime_count_ap(PrimeSieve(x), x, d, a); }

double bt_bound(uint64_t x, uint64_t d) {
  return 2.0 * static_cast<double>(x) /
         (static_cast<double>(euler_phi(d)) * std::log(static_cast<double>(x) / static_cast<double>(d)));
}

std::vector<BrunTitchmarshRow> brun_titchmarsh_sweep(uint64_t x, uint64_t d_lo, uint64_t d_hi) {
  if (d_lo < 1 || d_hi >= x || d_lo > d_hi) throw DomainError("brun_titchmarsh_sweep: need 1 <= d_lo <= d_hi < x");
  const PrimeSieve sieve(x);
  std::vector<BrunTitchmarshRow> rows;
  for (uint64_t d = d_lo; d <= d_hi; ++d) {
    BrunTitchmarshRow row;
    row.d = d;
    row.count = prime_count_ap(sieve, x, d, 1);
    row.bound = bt_bound(x, d);
    row.holds = static_cast<double>(row.count) <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

double rosser_schoenfeld_ratio(uint64_t d, uint64_t phi_d, double constant) {
  if (d < 3) throw DomainError("rosser_schoenfeld_ratio: d must be >= 3");
  const double ll = std::log(std::log(static_cast<double>(d)));
  const double lhs = static_cast<double>(d) / static_cast<double>(phi_d);
  return lhs / (std::exp(kEulerGamma) * ll + constant / ll);
}

RosserSchoenfeldResult rosser_schoenfeld_check(uint64_t d_max) {
  if (d_max < 3) throw DomainError("rosser_schoenfeld_check: d_max must be >= 3");
  if (d_max > 100'000'000) throw CapacityError("rosser_schoenfeld_check: d_max capped at 10^8");
  const auto phi = phi_table(static_cast<uint32_t>(d_max));
  RosserSchoenfeldResult result;
  for (uint64_t d = 3; d <= d_max; ++d) {
    if (d == kRosserSchoenfeldExceptional) continue;
    const double r = rosser_schoenfeld_ratio(d, phi[d]);
    ++result.checked;
    if (r > result.max_ratio) {
      result.max_ratio = r;
      result.argmax = d;
    }
    if (r > 1.0) ++result.violations;
  }
  return result;
}

bool non_increasing(const std::vector<SurveyRow>& rows) {
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].probability > rows[i - 1].probability) return false;
  return true;
}

}  // namespace shornoise
