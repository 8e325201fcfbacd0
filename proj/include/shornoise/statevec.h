#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "shornoise/noise.h"
#include "shornoise/periodic.h"

namespace shornoise {

inline constexpr unsigned kMaxSimulatorQubits = 20;

/// Dense n-qubit state. Basis index = sum_s u_s 2^s; qubit s is bit s.
class QuantumState {
 public:
  /// |0...0>. CapacityError above 20 qubits.
  explicit QuantumState(unsigned n);

  static QuantumState basis(unsigned n, uint64_t index);

  unsigned n() const { return n_; }
  uint64_t dimension() const { return uint64_t{1} << n_; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  double norm_squared() const;

  void apply_hadamard(unsigned qubit);
  /// Multiplies amplitudes with both bits set by exp(2 pi i turns).
  void apply_controlled_phase(unsigned control, unsigned target, double turns);
  /// Bit-reversal permutation of the qubit order.
  void reverse_qubits();

 private:
  unsigned n_;
  std::vector<std::complex<double>> amps_;
};

/// Amplitude 1/sqrt(K) on every family member.
QuantumState prepare_periodic(const PeriodicFamily& family);

struct GateCounts {
  uint64_t hadamards = 0;
  uint64_t perfect_rotations = 0;
  uint64_t perturbed_rotations = 0;
  uint64_t deleted_rotations = 0;
  uint64_t rotations() const { return perfect_rotations + perturbed_rotations; }
  /// Largest |norm^2 - 1| seen after any gate.
  double max_norm_drift = 0.0;
};

/// QFT gate sequence: for each sweep s (target qubit n-1-s), a Hadamard then
/// controlled-R_k for k = 2..n-s with control qubit n-s-k; finally the qubit
/// order is reversed. Each level k is applied perfectly, perturbed by
/// r^(s)_{k-b}, or skipped, per the mode. One draw per gate, shared by all
/// amplitudes. With `track_norm`, the norm is measured after every gate.
QuantumState apply_qft_noisy(QuantumState state, const NoiseConfig& config, const NoiseTape& tape,
                             GateCounts* counts = nullptr, bool track_norm = false);

/// P(v) = |amplitude_v|^2.
std::vector<double> measure_distribution(const QuantumState& state);

/// Inverse-CDF sample from a probability table with a uniform in (0, 1).
uint64_t sample_outcome(const std::vector<double>& distribution, double uniform);

struct PipelineOutcome {
  uint64_t trial = 0;
  bool factor_from_gcd = false;  ///< gcd(x, N) > 1, no quantum step needed
  uint64_t u_star = 0;
  uint64_t measured_v = 0;
  uint64_t candidate_period = 0;  ///< 0 when recovery failed
  bool period_valid = false;      ///< x^candidate == 1 (mod N)
  uint64_t factor_a = 0;          ///< nontrivial split when success
  uint64_t factor_b = 0;
  bool success = false;
};

struct PipelineStats {
  uint64_t N = 0;
  uint64_t x = 0;
  unsigned n = 0;
  uint64_t omega = 0;  ///< 0 if gcd(x, N) > 1
  uint64_t trials = 0;
  uint64_t successes = 0;
  std::vector<PipelineOutcome> outcomes;
  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// End-to-end period finding for small N. Per trial: u* = a mod w with a
/// uniform in [0, 2^n) (the induced second-register distribution), prepare the
/// periodic state, apply the noisy QFT with a fresh tape, sample v, recover a
/// candidate period by continued fractions, validate it, and try
/// gcd(x^(w/2) +- 1, N). Trials are seeded from (seed, trial index).
/// CapacityError when n exceeds 20 qubits.
PipelineStats full_pipeline(uint64_t N, uint64_t x, const NoiseConfig& config, uint64_t seed, uint64_t trials);

}  // namespace shornoise
