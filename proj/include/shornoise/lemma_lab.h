#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "shornoise/noise.h"
#include "shornoise/periodic.h"

namespace shornoise {

/// One instance of the random-unit-vector sum
///   |sum_k exp(i (phi_k + (2 pi sigma / m) sum_{i in S_k} X_i))|^2,
/// X_i i.i.d. N(0,1) over the universe [0, universe).
class SumSpec {
 public:
  /// Sets are index lists into [0, universe); duplicates are removed.
  /// Throws DomainError for m <= 0, sigma <= 0, t < 0, out-of-range indices,
  /// or offsets.size() != sets.size().
  SumSpec(double m, double sigma, double t, unsigned universe, std::vector<std::vector<unsigned>> sets,
          std::vector<double> offsets);

  double m() const { return m_; }
  double sigma() const { return sigma_; }
  double t() const { return t_; }
  unsigned universe() const { return universe_; }
  size_t K() const { return sets_.size(); }
  const std::vector<std::vector<unsigned>>& sets() const { return sets_; }
  const std::vector<double>& offsets() const { return offsets_; }

  /// (m / sigma)^2 t.
  double separation_threshold() const;
  /// Realized fraction of unordered pairs with |S_j delta S_k| below the threshold.
  double delta() const { return delta_; }
  uint64_t exceptional_pairs() const { return exceptional_pairs_; }

 private:
  double m_, sigma_, t_;
  unsigned universe_;
  std::vector<std::vector<unsigned>> sets_;
  std::vector<double> offsets_;
  double delta_ = 0.0;
  uint64_t exceptional_pairs_ = 0;
};

/// |A delta B| for sorted index lists.
size_t symmetric_difference_size(const std::vector<unsigned>& a, const std::vector<unsigned>& b);

/// K + 2 delta C(K,2) + 2 (1 - delta) C(K,2) exp(-2 pi^2 t).
double lemma22_bound(uint64_t K, double delta, double t);

struct SqNormEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
  double max_trial = 0.0;  ///< never exceeds K^2
};

/// Monte Carlo E|sum_k ...|^2 with fresh X per trial drawn from
/// counter_hash(seed, trial, i). Throws DomainError for trials < 100.
SqNormEstimate expected_sq_norm_mc(const SumSpec& spec, uint64_t trials, uint64_t seed);

struct CosMoment {
  double mc_mean = 0.0;
  double std_error = 0.0;
  double analytic = 1.0;  ///< exp(-sigma^2 / 2)
};

/// E[cos(sigma Z)] by Monte Carlo against exp(-sigma^2/2).
CosMoment cos_moment_check(double sigma, uint64_t trials, uint64_t seed);

/// floor((3/4) log2 w), computed exactly: the largest i with 2^(4i) <= w^3.
unsigned segment_cutoff(uint64_t omega);

/// True iff (2k-1) w / 2^i <= j < 2k w / 2^i for some 1 <= k <= 2^(i-1),
/// i.e. j falls in an odd-indexed segment of length w / 2^i.
bool bit_from_segment(uint64_t j, uint64_t omega, unsigned n, unsigned i);

struct IntHistogram {
  std::map<uint64_t, uint64_t> counts;
  uint64_t samples = 0;
  double mean() const;
  /// Fraction of samples with value < threshold.
  double fraction_below(double threshold) const;
};

/// Histogram of |{i in [j_lo, j_hi] : v_{n-i} = 1}| for v = floor(2^n j / w),
/// j uniform in [0, w). samples = 0 enumerates every j.
/// Throws DomainError unless 1 <= j_lo <= j_hi <= segment_cutoff(w).
IntHistogram ones_count_stat(uint64_t omega, unsigned n, unsigned j_lo, unsigned j_hi, uint64_t samples,
                             uint64_t seed);

struct Closeness {
  double max_deviation = 0.0;
  /// max_deviation = numerator / denominator exactly.
  uint64_t numerator = 0;
  uint64_t denominator = 1;
};

/// max_j |Pr_alpha(j) / Pr(j) - 1| from the exact integer counts of the 2^i0
/// segments of [0, w). Throws DomainError unless 2^i0 <= w.
Closeness distribution_closeness(uint64_t omega, unsigned i0);

/// Exact rational test of distribution_closeness <= 2^i0 / (w - 2^i0).
bool closeness_within_bound(const Closeness& c, uint64_t omega, unsigned i0);

/// Default window [b + ord2(w), i0] of bit indices for the pair statistic.
std::pair<unsigned, unsigned> pair_window(uint64_t omega, unsigned band);

/// Histogram of |{i in [t_lo, t_hi] : u^(k)_{i-b} != u^(k')_{i-b}}| over
/// uniformly sampled unordered pairs k != k'. Throws DomainError if K < 2
/// or t_lo < b.
IntHistogram pair_bit_diff_stat(const PeriodicFamily& family, unsigned band, unsigned t_lo, unsigned t_hi,
                                uint64_t pair_samples, uint64_t seed);

/// T_j = {d + b <= i <= i0 : v_{n-i} = 1}, d = ord2(w), i0 = segment_cutoff(w),
/// restricted to i <= n.
std::vector<unsigned> retained_indices(const PeriodicFamily& family, uint64_t v, unsigned band);

/// (2 pi eps / 2^b) sum_{i in T_j} u^(k)_{i-b} r^(n-i)_0, in radians.
double retained_noise_sum(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config,
                          const NoiseTape& tape, uint64_t k);

/// The retained-term sums as a SumSpec over the tape draws r^(s)_0:
/// S_k = {n - i : i in T_j, u^(k)_{i-b} = 1} for k in `members`, m = 2^b,
/// sigma = eps, offsets 0.
SumSpec retained_sum_spec(const PeriodicFamily& family, uint64_t v, unsigned band, double epsilon, double t,
                          const std::vector<uint64_t>& members);

}  // namespace shornoise
