#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "shornoise/noise.h"
#include "shornoise/periodic.h"

namespace shornoise {

/// Noiseless part of the exponent for |u> -> |v>, in turns, reduced to [0, 1):
///   sum_s v_s sum_{k kept} u_{n-s-k} / 2^k
/// over gate levels k = 1..n-s that the mode does not delete.
double circuit_phase(uint64_t u, uint64_t v, unsigned n, const NoiseConfig& config);

/// Noise part of the exponent, in turns, not reduced:
///   sum_s v_s sum_{k perturbed} u_{n-s-k} eps r^(s)_{k-b} / 2^k.
/// Zero for noiseless modes. Throws ConfigError on a tape/config mismatch.
double noise_phase(uint64_t u, uint64_t v, unsigned n, const NoiseConfig& config, const NoiseTape& tape);

/// Direct evaluation of (1/(2^n K)) |sum_k exp(2 pi i [circuit + noise](u^(k), v))|^2,
/// O(K n^2). Serial reference for the table kernel.
double prob_observe_reference(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config,
                              const NoiseTape& tape);

/// Evaluates observation probabilities through per-bit phase weights.
///
/// For fixed v the total exponent is linear in the bits of u:
/// phase(u) = sum_p u_p w_p(v). The kernel precomputes each sweep's
/// contribution to w_p, builds unit-modulus lookup tables over byte-sized
/// chunks of u, and sums K table products per v. Cost per v is
/// O(popcount(v) n + 2^chunk + K n / chunk).
class PhaseKernel {
 public:
  PhaseKernel(unsigned n, const NoiseConfig& config, const NoiseTape& tape);

  unsigned n() const { return n_; }

  /// Bit weights w_p(v), each reduced to [0, 1).
  std::vector<double> weights(uint64_t v) const;

  /// sum_k exp(2 pi i phase(u^(k), v)).
  std::complex<double> amplitude_sum(const PeriodicFamily& family, uint64_t v) const;

  double probability(const PeriodicFamily& family, uint64_t v) const;

 private:
  unsigned n_;
  // contribution_[s * n + p]: what sweep s adds to w_p when v_s = 1.
  std::vector<double> contribution_;
};

/// prob_observe via PhaseKernel.
double prob_observe(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config, const NoiseTape& tape);

inline constexpr unsigned kFullTableMaxQubits = 16;

/// P(v) for every v in [0, 2^n); OpenMP-parallel over v. CapacityError for n > 16.
std::vector<double> prob_table(const PeriodicFamily& family, const NoiseConfig& config, const NoiseTape& tape);

/// Serial, reference-evaluator version of prob_table.
std::vector<double> prob_table_reference(const PeriodicFamily& family, const NoiseConfig& config,
                                         const NoiseTape& tape);

/// Probabilities at an explicit list of outcomes; OpenMP-parallel.
std::vector<double> prob_at(const PeriodicFamily& family, const std::vector<uint64_t>& outcomes,
                            const NoiseConfig& config, const NoiseTape& tape);

/// Noiseless full-gate-set probability from the geometric-sum closed form
/// sin^2(pi K theta) / (2^n K sin^2(pi theta)), theta = frac(w v / 2^n);
/// K / 2^n at theta = 0.
double closed_form_exact(const PeriodicFamily& family, uint64_t v);

/// Total probability on useful_set(family, radius).
double useful_mass(const PeriodicFamily& family, const NoiseConfig& config, const NoiseTape& tape, uint64_t radius);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
  /// False when trials == 1 (stderr reported as 0 by convention).
  bool stderr_defined = false;
  /// Per-trial values; a single entry when the result does not depend on the tape.
  std::vector<double> per_trial;
  std::vector<uint64_t> trial_seeds;
};

/// Sample mean and standard error sd/sqrt(n) of `values`.
MonteCarloEstimate summarize(std::vector<double> values, std::vector<uint64_t> seeds);

/// Seed of the tape used in Monte Carlo trial `trial`.
uint64_t trial_tape_seed(uint64_t master_seed, uint64_t trial);

/// Monte Carlo estimate of E_tape[useful_mass] over `trials` independent
/// tapes seeded by trial_tape_seed(config.seed, i). Noiseless settings
/// (noiseless mode or epsilon = 0) are evaluated once with stderr 0.
MonteCarloEstimate expected_useful_mass(const PeriodicFamily& family, const NoiseConfig& config, uint64_t radius,
                                        uint64_t trials);

}  // namespace shornoise
