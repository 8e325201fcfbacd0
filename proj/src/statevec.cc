#include "shornoise/statevec.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "shornoise/analytic.h"
#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/numtheory.h"

namespace shornoise {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

QuantumState::QuantumState(unsigned n) : n_(n) {
  if (n == 0 || n > kMaxSimulatorQubits)
    throw CapacityError("state vector simulator supports 1..20 qubits, requested " + std::to_string(n));
  amps_.assign(dimension(), 0.0);
  amps_[0] = 1.0;
}

QuantumState QuantumState::basis(unsigned n, uint64_t index) {
  QuantumState s(n);
  if (index >= s.dimension()) throw IndexError("QuantumState::basis: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double QuantumState::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void QuantumState::apply_hadamard(unsigned qubit) {
  const int64_t stride = int64_t{1} << qubit;
  const auto dim = static_cast<int64_t>(dimension());
  const double h = 1.0 / std::sqrt(2.0);
  auto* a = amps_.data();
#pragma omp parallel for schedule(static)
  for (int64_t base = 0; base < dim / 2; ++base) {
    // Insert a zero at bit position `qubit`.
    const int64_t i = ((base >> qubit) << (qubit + 1)) | (base & (stride - 1));
    const int64_t j = i | stride;
    const std::complex<double> x = a[i], y = a[j];
    a[i] = (x + y) * h;
    a[j] = (x - y) * h;
  }
}

void QuantumState::apply_controlled_phase(unsigned control, unsigned target, double turns) {
  const double r = kTwoPi * (turns - std::floor(turns));
  const std::complex<double> phase(std::cos(r), std::sin(r));
  const uint64_t both = (uint64_t{1} << control) | (uint64_t{1} << target);
  const auto dim = static_cast<int64_t>(dimension());
  auto* a = amps_.data();
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < dim; ++i)
    if ((static_cast<uint64_t>(i) & both) == both) a[i] *= phase;
}

void QuantumState::reverse_qubits() {
  const uint64_t dim = dimension();
  for (uint64_t i = 0; i < dim; ++i) {
    uint64_t r = 0;
    for (unsigned b = 0; b < n_; ++b) r |= ((i >> b) & 1u) << (n_ - 1 - b);
    if (r > i) std::swap(amps_[i], amps_[r]);
  }
}

QuantumState prepare_periodic(const PeriodicFamily& family) {
  QuantumState state(family.n());
  auto& amps = state.amplitudes();
  amps[0] = 0.0;
  const double a = 1.0 / std::sqrt(static_cast<double>(family.size()));
  for (uint64_t k = 0; k < family.size(); ++k) amps[family.member(k)] = a;
  return state;
}

QuantumState apply_qft_noisy(QuantumState state, const NoiseConfig& config, const NoiseTape& tape,
                             GateCounts* counts, bool track_norm) {
  config.validate();
  const unsigned n = state.n();
  if (is_noisy(config.mode)) tape.check_matches(n, config);
  GateCounts local;
  auto observe = [&] {
    if (track_norm) local.max_norm_drift = std::max(local.max_norm_drift, std::abs(state.norm_squared() - 1.0));
  };
  for (unsigned s = 0; s < n; ++s) {
    const unsigned target = n - 1 - s;
    state.apply_hadamard(target);
    ++local.hadamards;
    observe();
    for (unsigned k = 2; k + s <= n; ++k) {
      const unsigned control = n - s - k;
      switch (gate_action(config, k)) {
        case GateAction::deleted: ++local.deleted_rotations; continue;
        case GateAction::perfect:
          state.apply_controlled_phase(control, target, perturbed_angle(k, 0.0, 0.0));
          ++local.perfect_rotations;
          break;
        case GateAction::perturbed:
          state.apply_controlled_phase(control, target, perturbed_angle(k, tape.at(s, k - config.band), config.epsilon));
          ++local.perturbed_rotations;
          break;
      }
      observe();
    }
  }
  state.reverse_qubits();
  if (counts) *counts = local;
  return state;
}

std::vector<double> measure_distribution(const QuantumState& state) {
  std::vector<double> out(state.dimension());
  const auto& amps = state.amplitudes();
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::norm(amps[i]);
  return out;
}

uint64_t sample_outcome(const std::vector<double>& distribution, double uniform) {
  double total = 0.0;
  for (double p : distribution) total += p;
  double target = uniform * total;
  double acc = 0.0;
  for (size_t v = 0; v < distribution.size(); ++v) {
    acc += distribution[v];
    if (target < acc) return v;
  }
  // Rounding left the target beyond the last bucket: return the last nonzero outcome.
  for (size_t v = distribution.size(); v-- > 0;)
    if (distribution[v] > 0.0) return v;
  return 0;
}

PipelineStats full_pipeline(uint64_t N, uint64_t x, const NoiseConfig& config, uint64_t seed, uint64_t trials) {
  config.validate();
  if (x < 3 || x >= N) throw ConfigError("full_pipeline: need 3 <= x < N");
  PipelineStats stats;
  stats.N = N;
  stats.x = x;
  stats.trials = trials;
  const auto inst = make_instance(N, x);
  if (const auto* revealed = std::get_if<FactorRevealed>(&inst)) {
    stats.n = qubits_for_modulus(N);
    for (uint64_t t = 0; t < trials; ++t) {
      PipelineOutcome o;
      o.trial = t;
      o.factor_from_gcd = true;
      o.factor_a = revealed->factor;
      o.factor_b = N / revealed->factor;
      o.success = true;
      stats.outcomes.push_back(o);
    }
    stats.successes = trials;
    return stats;
  }
  const auto& shor = std::get<ShorInstance>(inst);
  stats.n = shor.n;
  stats.omega = shor.omega;
  if (shor.n > kMaxSimulatorQubits)
    throw CapacityError("full_pipeline: N=" + std::to_string(N) + " needs " + std::to_string(shor.n) +
                        " qubits, simulator cap is 20");

  const bool noiseless = !is_noisy(config.mode) || config.epsilon == 0.0;
  // cached_[u*] holds the noiseless distribution, which depends only on u*.
  std::vector<std::vector<double>> cached(noiseless ? shor.omega : 0);

  for (uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, t));
    PipelineOutcome o;
    o.trial = t;
    o.u_star = rng.below(uint64_t{1} << shor.n) % shor.omega;
    const PeriodicFamily family(shor.n, shor.omega, o.u_star);

    std::vector<double> dist;
    if (noiseless && !cached[o.u_star].empty()) {
      dist = cached[o.u_star];
    } else {
      NoiseConfig trial_config = config;
      trial_config.seed = trial_tape_seed(seed, t);
      const NoiseTape tape = draw_tape(shor.n, trial_config);
      dist = measure_distribution(apply_qft_noisy(prepare_periodic(family), trial_config, tape));
      if (noiseless) cached[o.u_star] = dist;
    }
    o.measured_v = sample_outcome(dist, rng.uniform());

    if (auto candidate = recover_period(o.measured_v, shor.n, N)) {
      o.candidate_period = *candidate;
      o.period_valid = pow_mod(x, *candidate, N) == 1;
      if (o.period_valid && *candidate % 2 == 0) {
        const uint64_t half = pow_mod(x, *candidate / 2, N);
        for (uint64_t g : {gcd_u64(half + N - 1, N), gcd_u64(half + 1, N)}) {
          if (g != 1 && g != N) {
            o.factor_a = std::min(g, N / g);
            o.factor_b = std::max(g, N / g);
            o.success = true;
            break;
          }
        }
      }
    }
    if (o.success) ++stats.successes;
    stats.outcomes.push_back(o);
  }
  return stats;
}

}  // namespace shornoise
