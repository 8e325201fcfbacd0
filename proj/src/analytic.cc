#include "shornoise/analytic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/statevec.h"

namespace shornoise {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline unsigned bit(uint64_t x, int s) { return s < 0 ? 0u : static_cast<unsigned>((x >> s) & 1u); }

inline double frac(double x) { return x - std::floor(x); }

inline std::complex<double> turn(double phase) {
  double r = kTwoPi * frac(phase);
  return {std::cos(r), std::sin(r)};
}

}  // namespace

double circuit_phase(uint64_t u, uint64_t v, unsigned n, const NoiseConfig& config) {
  double phase = 0.0;
  for (unsigned s = 0; s < n; ++s) {
    if (!bit(v, static_cast<int>(s))) continue;
    for (unsigned k = 1; k + s <= n; ++k) {
      if (gate_action(config, k) == GateAction::deleted) continue;
      if (bit(u, static_cast<int>(n - s - k))) phase += std::ldexp(1.0, -static_cast<int>(k));
    }
  }
  return frac(phase);
}

double noise_phase(uint64_t u, uint64_t v, unsigned n, const NoiseConfig& config, const NoiseTape& tape) {
  if (!is_noisy(config.mode)) return 0.0;
  tape.check_matches(n, config);
  double phase = 0.0;
  for (unsigned s = 0; s < n; ++s) {
    if (!bit(v, static_cast<int>(s))) continue;
    for (unsigned k = config.band; k + s <= n; ++k) {
      if (gate_action(config, k) != GateAction::perturbed) continue;
      if (bit(u, static_cast<int>(n - s - k)))
        phase += config.epsilon * tape.at(s, k - config.band) * std::ldexp(1.0, -static_cast<int>(k));
    }
  }
  return phase;
}

double prob_observe_reference(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config,
                              const NoiseTape& tape) {
  const unsigned n = family.n();
  std::complex<double> acc = 0.0;
  for (uint64_t k = 0; k < family.size(); ++k) {
    uint64_t u = family.member(k);
    acc += turn(circuit_phase(u, v, n, config) + noise_phase(u, v, n, config, tape));
  }
  return std::norm(acc) / (std::ldexp(1.0, static_cast<int>(n)) * static_cast<double>(family.size()));
}

PhaseKernel::PhaseKernel(unsigned n, const NoiseConfig& config, const NoiseTape& tape)
    : n_(n), contribution_(static_cast<size_t>(n) * n, 0.0) {
  config.validate();
  if (is_noisy(config.mode)) tape.check_matches(n, config);
  for (unsigned s = 0; s < n; ++s) {
    for (unsigned k = 1; k + s <= n; ++k) {
      const unsigned p = n - s - k;
      const double scale = std::ldexp(1.0, -static_cast<int>(k));
      double c = 0.0;
      switch (gate_action(config, k)) {
        case GateAction::deleted: break;
        case GateAction::perfect: c = scale; break;
        case GateAction::perturbed: c = scale + config.epsilon * tape.at(s, k - config.band) * scale; break;
      }
      contribution_[static_cast<size_t>(s) * n + p] = c;
    }
  }
}

std::vector<double> PhaseKernel::weights(uint64_t v) const {
  std::vector<double> w(n_, 0.0);
  for (unsigned s = 0; s < n_; ++s) {
    if (!bit(v, static_cast<int>(s))) continue;
    const double* row = &contribution_[static_cast<size_t>(s) * n_];
    for (unsigned p = 0; p < n_; ++p) w[p] += row[p];
  }
  for (double& x : w) x = frac(x);
  return w;
}

std::complex<double> PhaseKernel::amplitude_sum(const PeriodicFamily& family, uint64_t v) const {
  const std::vector<double> w = weights(v);
  const uint64_t K = family.size();
  const unsigned chunk = K >= 256 ? 8 : 4;
  const unsigned chunks = (n_ + chunk - 1) / chunk;
  const size_t entries = size_t{1} << chunk;

  // tables[c][x] = exp(2 pi i sum_{j : x_j = 1} w_{c*chunk + j})
  std::array<std::complex<double>, 8 * 256> tables;
  for (unsigned c = 0; c < chunks; ++c) {
    std::complex<double>* table = &tables[c * entries];
    table[0] = 1.0;
    for (unsigned j = 0; j < chunk; ++j) {
      const unsigned p = c * chunk + j;
      const std::complex<double> e = p < n_ ? turn(w[p]) : std::complex<double>(1.0);
      const size_t half = size_t{1} << j;
      for (size_t x = 0; x < half; ++x) table[half + x] = table[x] * e;
    }
  }

  const uint64_t mask = entries - 1;
  double re = 0.0, im = 0.0;
  uint64_t u = family.u_star();
  const uint64_t step = family.omega();
  for (uint64_t k = 0; k < K; ++k, u += step) {
    std::complex<double> z = tables[u & mask];
    for (unsigned c = 1; c < chunks; ++c) z *= tables[c * entries + ((u >> (c * chunk)) & mask)];
    re += z.real();
    im += z.imag();
  }
  return {re, im};
}

double PhaseKernel::probability(const PeriodicFamily& family, uint64_t v) const {
  return std::norm(amplitude_sum(family, v)) /
         (std::ldexp(1.0, static_cast<int>(n_)) * static_cast<double>(family.size()));
}

double prob_observe(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config, const NoiseTape& tape) {
  if (v >= family.dimension()) throw DomainError("prob_observe: v must be < 2^n");
  return PhaseKernel(family.n(), config, tape).probability(family, v);
}

std::vector<double> prob_table(const PeriodicFamily& family, const NoiseConfig& config, const NoiseTape& tape) {
  if (family.n() > kFullTableMaxQubits)
    throw CapacityError("prob_table: full per-v tables are limited to n <= 16");
  const PhaseKernel kernel(family.n(), config, tape);
  const auto dim = static_cast<int64_t>(family.dimension());
  std::vector<double> out(static_cast<size_t>(dim));
#pragma omp parallel for schedule(dynamic, 64)
  for (int64_t v = 0; v < dim; ++v) out[static_cast<size_t>(v)] = kernel.probability(family, static_cast<uint64_t>(v));
  return out;
}

std::vector<double> prob_table_reference(const PeriodicFamily& family, const NoiseConfig& config,
                                         const NoiseTape& tape) {
  if (family.n() > kFullTableMaxQubits)
    throw CapacityError("prob_table_reference: full per-v tables are limited to n <= 16");
  std::vector<double> out(family.dimension());
  for (uint64_t v = 0; v < family.dimension(); ++v) out[v] = prob_observe_reference(family, v, config, tape);
  return out;
}

std::vector<double> prob_at(const PeriodicFamily& family, const std::vector<uint64_t>& outcomes,
                            const NoiseConfig& config, const NoiseTape& tape) {
  const PhaseKernel kernel(family.n(), config, tape);
  const auto count = static_cast<int64_t>(outcomes.size());
  std::vector<double> out(outcomes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t i = 0; i < count; ++i) out[static_cast<size_t>(i)] = kernel.probability(family, outcomes[static_cast<size_t>(i)]);
  return out;
}

double closed_form_exact(const PeriodicFamily& family, uint64_t v) {
  using u128 = unsigned __int128;
  const unsigned n = family.n();
  const uint64_t dim = family.dimension();
  const uint64_t mask = dim - 1;
  const uint64_t K = family.size();
  const uint64_t theta_num = static_cast<uint64_t>(static_cast<u128>(family.omega()) * v) & mask;
  const double scale = std::ldexp(1.0, static_cast<int>(n)) * static_cast<double>(K);
  if (theta_num == 0) return static_cast<double>(K) / std::ldexp(1.0, static_cast<int>(n));
  const uint64_t ktheta_num = static_cast<uint64_t>(static_cast<u128>(K) * theta_num) & mask;
  const double theta = std::ldexp(static_cast<double>(theta_num), -static_cast<int>(n));
  const double ktheta = std::ldexp(static_cast<double>(ktheta_num), -static_cast<int>(n));
  const double num = std::sin(M_PI * ktheta);
  const double den = std::sin(M_PI * theta);
  return num * num / (den * den * scale);
}

double useful_mass(const PeriodicFamily& family, const NoiseConfig& config, const NoiseTape& tape, uint64_t radius) {
  const auto outcomes = useful_set(family, radius);
  const auto probs = prob_at(family, outcomes, config, tape);
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

MonteCarloEstimate summarize(std::vector<double> values, std::vector<uint64_t> seeds) {
  MonteCarloEstimate est;
  est.trials = values.size();
  if (values.empty()) return est;
  const double count = static_cast<double>(values.size());
  est.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double x : values) ss += (x - est.mean) * (x - est.mean);
    est.std_error = std::sqrt(ss / (count - 1) / count);
    est.stderr_defined = true;
  }
  est.per_trial = std::move(values);
  est.trial_seeds = std::move(seeds);
  return est;
}

uint64_t trial_tape_seed(uint64_t master_seed, uint64_t trial) { return derive_seed(master_seed, trial); }

MonteCarloEstimate expected_useful_mass(const PeriodicFamily& family, const NoiseConfig& config, uint64_t radius,
                                        uint64_t trials) {
  config.validate();
  if (trials < 1) throw ConfigError("expected_useful_mass: trials must be >= 1");
  const auto outcomes = useful_set(family, radius);
  // Dense useful sets (large radius) are cheaper through one statevector pass.
  const unsigned n = family.n();
  const bool dense = n <= kMaxSimulatorQubits &&
                     static_cast<double>(outcomes.size()) * static_cast<double>(family.size()) >
                         std::ldexp(static_cast<double>(n) * n / 8, static_cast<int>(n));
  const auto mass_for = [&](const NoiseTape& tape) {
    if (dense) {
      const auto dist = measure_distribution(apply_qft_noisy(prepare_periodic(family), config, tape));
      double mass = 0.0;
      for (uint64_t v : outcomes) mass += dist[v];
      return mass;
    }
    const PhaseKernel kernel(family.n(), config, tape);
    double mass = 0.0;
    for (uint64_t v : outcomes) mass += kernel.probability(family, v);
    return mass;
  };

  if (!is_noisy(config.mode) || config.epsilon == 0.0) {
    NoiseConfig quiet = config;
    NoiseTape tape = draw_tape(family.n(), quiet);
    auto est = summarize({mass_for(tape)}, {config.seed});
    est.trials = trials;
    est.stderr_defined = trials > 1;
    return est;
  }

  std::vector<double> values(trials);
  std::vector<uint64_t> seeds(trials);
  const auto count = static_cast<int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t i = 0; i < count; ++i) {
    NoiseConfig trial_config = config;
    trial_config.seed = trial_tape_seed(config.seed, static_cast<uint64_t>(i));
    seeds[static_cast<size_t>(i)] = trial_config.seed;
    values[static_cast<size_t>(i)] = mass_for(draw_tape(family.n(), trial_config));
  }
  return summarize(std::move(values), std::move(seeds));
}

}  // namespace shornoise
