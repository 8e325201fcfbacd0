#pragma once

#include <cstdint>
#include <vector>

#include "shornoise/counter_rng.h"
#include "shornoise/numtheory.h"

namespace shornoise {

/// All primes of binary length m, i.e. in [2^(m-1), 2^m - 1]; m in [3, 24].
class MBitPrimes {
 public:
  explicit MBitPrimes(unsigned m_bits);
  unsigned bits() const { return bits_; }
  const std::vector<uint64_t>& primes() const { return primes_; }
  uint64_t sample(CounterRng& rng) const { return primes_[rng.below(primes_.size())]; }

 private:
  unsigned bits_;
  std::vector<uint64_t> primes_;
};

struct PrimePairSample {
  uint64_t p = 0, q = 0;
  uint64_t N = 0;
  uint64_t phi = 0;           ///< (p-1)(q-1)
  uint64_t gcd_pm1 = 0;       ///< gcd(p-1, q-1)
  uint64_t group_exponent = 0;  ///< O_N = lcm(p-1, q-1)
};

/// Distinct p != q uniform over the m-bit primes.
PrimePairSample sample_prime_pair(const MBitPrimes& primes, CounterRng& rng);

struct SurveyRow {
  double threshold = 0.0;
  double probability = 0.0;
  uint64_t samples = 0;
  double std_error = 0.0;
};

struct SurveyTable {
  std::vector<SurveyRow> rows;
  /// Per-sample identities that failed (must be 0).
  uint64_t identity_failures = 0;
  uint64_t identity_checks = 0;
};

/// Empirical Pr(w_N(g) < phi(N)/A) over (p, q, g). Per sample also checks
/// w_N = lcm(w_p, w_q), O_N = phi(N)/gcd(p-1, q-1), and
/// w_N >= lcm(p-1, q-1)/(a b) with a = (p-1)/w_p, b = (q-1)/w_q.
SurveyTable order_ratio_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& A_values,
                               uint64_t seed);

/// Empirical Pr(gcd(p-1, q-1) > A1), asserting O_N < phi/A1 <=> gcd > A1 per sample.
SurveyTable gcd_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& A1_values, uint64_t seed);

/// Empirical Pr(w_p(g) < (p-1)/B) over random (p, g).
SurveyTable per_prime_order_survey(unsigned m_bits, uint64_t samples, const std::vector<uint64_t>& B_values,
                                   uint64_t seed);

struct Ord2TailRow {
  unsigned e = 0;
  uint64_t hits = 0;    ///< primes with ord2(p-1) >= e
  uint64_t primes = 0;  ///< all m-bit primes
  double probability = 0.0;
  double reference = 0.0;    ///< 2^(1-e)
  double bt_estimate = 0.0;  ///< 2X / (phi(2^e) log(X/2^e)) / (pi(X) - pi(Y))
};

/// Exhaustive over m-bit primes. Z_p^* being cyclic, "some g has
/// ord2(w_p(g)) >= e" is the same event as ord2(p-1) >= e.
std::vector<Ord2TailRow> ord2_tail_survey(unsigned m_bits, const std::vector<unsigned>& e_values);

/// pi(x; d, a). Throws DomainError when gcd(a, d) != 1 or d >= x.
uint64_t prime_count_ap(uint64_t x, uint64_t d, uint64_t a);
/// Same, reusing a sieve covering [0, x].
uint64_t prime_count_ap(const PrimeSieve& sieve, uint64_t x, uint64_t d, uint64_t a);

/// 2x / (phi(d) ln(x/d)).
double bt_bound(uint64_t x, uint64_t d);

struct BrunTitchmarshRow {
  uint64_t d = 0;
  uint64_t count = 0;
  double bound = 0.0;
  bool holds = false;
};

/// pi(x; d, 1) against bt_bound for every d in [d_lo, d_hi].
std::vector<BrunTitchmarshRow> brun_titchmarsh_sweep(uint64_t x, uint64_t d_lo, uint64_t d_hi);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr uint64_t kRosserSchoenfeldExceptional = 223092870;  // 2*3*5*...*23
inline constexpr double kRosserSchoenfeldExceptionalConstant = 2.50637;

/// (d/phi(d)) / (e^gamma ln ln d + c / ln ln d), natural logs, d >= 3.
double rosser_schoenfeld_ratio(uint64_t d, uint64_t phi_d, double constant = 2.5);

struct RosserSchoenfeldResult {
  double max_ratio = 0.0;
  uint64_t argmax = 0;
  uint64_t violations = 0;  ///< d with ratio > 1 (exceptional d excluded)
  uint64_t checked = 0;
};

/// Ratio over 3 <= d <= d_max with constant 2.5, skipping the exceptional d.
RosserSchoenfeldResult rosser_schoenfeld_check(uint64_t d_max);

/// Ratio across a sorted threshold list is non-increasing (as expected for
/// "order below phi/A" events as A grows).
bool non_increasing(const std::vector<SurveyRow>& rows);

}  // namespace shornoise
