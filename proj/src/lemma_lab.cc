#include "shornoise/lemma_lab.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/numtheory.h"

namespace shornoise {

namespace {
using u128 = unsigned __int128;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

size_t symmetric_difference_size(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  size_t i = 0, j = 0, diff = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
      ++diff;
    } else {
      ++j;
      ++diff;
    }
  }
  return diff + (a.size() - i) + (b.size() - j);
}

SumSpec::SumSpec(double m, double sigma, double t, unsigned universe, std::vector<std::vector<unsigned>> sets,
                 std::vector<double> offsets)
    : m_(m), sigma_(sigma), t_(t), universe_(universe), sets_(std::move(sets)), offsets_(std::move(offsets)) {
  if (!(m > 0) || !(sigma > 0) || !(t >= 0)) throw DomainError("SumSpec: need m > 0, sigma > 0, t >= 0");
  if (offsets_.size() != sets_.size()) throw DomainError("SumSpec: one offset per set required");
  for (auto& s : sets_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= universe_) throw DomainError("SumSpec: set index outside the universe");
  }
  const double threshold = separation_threshold();
  const uint64_t K = sets_.size();
  for (size_t j = 0; j < K; ++j)
    for (size_t k = j + 1; k < K; ++k)
      if (static_cast<double>(symmetric_difference_size(sets_[j], sets_[k])) < threshold) ++exceptional_pairs_;
  const uint64_t pairs = K * (K - 1) / 2;
  delta_ = pairs == 0 ? 0.0 : static_cast<double>(exceptional_pairs_) / static_cast<double>(pairs);
}

double SumSpec::separation_threshold() const { return (m_ / sigma_) * (m_ / sigma_) * t_; }

double lemma22_bound(uint64_t K, double delta, double t) {
  const double k = static_cast<double>(K);
  const double pairs = k * (k - 1) / 2;
  return k + 2 * delta * pairs + 2 * (1 - delta) * pairs * std::exp(-2 * M_PI * M_PI * t);
}

SqNormEstimate expected_sq_norm_mc(const SumSpec& spec, uint64_t trials, uint64_t seed) {
  if (trials < 100) throw DomainError("expected_sq_norm_mc: trials must be >= 100");
  const double scale = kTwoPi * spec.sigma() / spec.m();
  std::vector<double> values(trials);
  const auto count = static_cast<int64_t>(trials);
#pragma omp parallel for schedule(static)
  for (int64_t tr = 0; tr < count; ++tr) {
    std::vector<double> x(spec.universe());
    for (unsigned i = 0; i < spec.universe(); ++i)
      x[i] = inverse_normal_cdf(to_unit_open(counter_hash(seed, static_cast<uint64_t>(tr), i)));
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k < spec.K(); ++k) {
      double sum = 0.0;
      for (unsigned i : spec.sets()[k]) sum += x[i];
      acc += std::polar(1.0, spec.offsets()[k] + scale * sum);
    }
    values[static_cast<size_t>(tr)] = std::norm(acc);
  }
  SqNormEstimate est;
  est.trials = trials;
  double total = 0.0;
  for (double v : values) {
    total += v;
    est.max_trial = std::max(est.max_trial, v);
  }
  est.mean = total / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.std_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  return est;
}

CosMoment cos_moment_check(double sigma, uint64_t trials, uint64_t seed) {
  if (!(sigma >= 0)) throw DomainError("cos_moment_check: sigma must be >= 0");
  if (trials < 2) throw DomainError("cos_moment_check: trials must be >= 2");
  CounterRng rng(seed, 0x636f73ULL);
  double sum = 0.0, sum_sq = 0.0;
  for (uint64_t i = 0; i < trials; ++i) {
    double c = std::cos(sigma * rng.gaussian());
    sum += c;
    sum_sq += c * c;
  }
  const double n = static_cast<double>(trials);
  CosMoment out;
  out.mc_mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * out.mc_mean * out.mc_mean) / (n - 1));
  out.std_error = std::sqrt(var / n);
  out.analytic = std::exp(-sigma * sigma / 2);
  return out;
}

unsigned segment_cutoff(uint64_t omega) {
  if (omega < 1 || omega >= (uint64_t{1} << 42)) throw DomainError("segment_cutoff: omega must be in [1, 2^42)");
  const u128 cube = static_cast<u128>(omega) * omega * omega;
  unsigned i = 0;
  while (4 * (i + 1) < 128 && (static_cast<u128>(1) << (4 * (i + 1))) <= cube) ++i;
  return i;
}

bool bit_from_segment(uint64_t j, uint64_t omega, unsigned n, unsigned i) {
  if (omega < 1 || j >= omega) throw DomainError("bit_from_segment: need 0 <= j < omega");
  if (i < 1 || i > n || i > 63) throw DomainError("bit_from_segment: need 1 <= i <= n");
  const u128 scaled = static_cast<u128>(j) << i;  // j 2^i
  // Only the segment pair containing j can satisfy the inequalities.
  const u128 k = (scaled / omega + 1) / 2;
  if (k < 1 || k > (static_cast<u128>(1) << (i - 1))) return false;
  return (2 * k - 1) * omega <= scaled && scaled < 2 * k * omega;
}

double IntHistogram::mean() const {
  if (samples == 0) return 0.0;
  double acc = 0.0;
  for (auto [value, count] : counts) acc += static_cast<double>(value) * static_cast<double>(count);
  return acc / static_cast<double>(samples);
}

double IntHistogram::fraction_below(double threshold) const {
  if (samples == 0) return 0.0;
  uint64_t below = 0;
  for (auto [value, count] : counts)
    if (static_cast<double>(value) < threshold) below += count;
  return static_cast<double>(below) / static_cast<double>(samples);
}

IntHistogram ones_count_stat(uint64_t omega, unsigned n, unsigned j_lo, unsigned j_hi, uint64_t samples,
                             uint64_t seed) {
  const unsigned i0 = segment_cutoff(omega);
  if (j_lo < 1 || j_lo > j_hi || j_hi > i0 || j_hi > n)
    throw DomainError("ones_count_stat: window must satisfy 1 <= lo <= hi <= min(i0, n), i0=" + std::to_string(i0));
  if (n > 63) throw DomainError("ones_count_stat: n must be <= 63");
  IntHistogram hist;
  auto record = [&](uint64_t j) {
    const uint64_t v = static_cast<uint64_t>((static_cast<u128>(j) << n) / omega);
    uint64_t ones = 0;
    for (unsigned i = j_lo; i <= j_hi; ++i) ones += (v >> (n - i)) & 1u;
    ++hist.counts[ones];
    ++hist.samples;
  };
  if (samples == 0) {
    for (uint64_t j = 0; j < omega; ++j) record(j);
  } else {
    CounterRng rng(seed, 0x6f6e6573ULL);
    for (uint64_t s = 0; s < samples; ++s) record(rng.below(omega));
  }
  return hist;
}

Closeness distribution_closeness(uint64_t omega, unsigned i0) {
  if (i0 > 40 || (uint64_t{1} << i0) > omega) throw DomainError("distribution_closeness: need 2^i0 <= omega");
  const uint64_t segments = uint64_t{1} << i0;
  auto ceil_div = [](u128 a, u128 b) { return (a + b - 1) / b; };
  Closeness best;
  best.numerator = 0;
  best.denominator = 1;
  for (uint64_t alpha = 0; alpha < segments; ++alpha) {
    // Integers in [alpha w / 2^i0, (alpha + 1) w / 2^i0).
    const uint64_t c = static_cast<uint64_t>(ceil_div(static_cast<u128>(alpha + 1) * omega, segments) -
                                             ceil_div(static_cast<u128>(alpha) * omega, segments));
    // Pr_alpha(j) / Pr(j) = w / (2^i0 c)
    const u128 scaled = static_cast<u128>(segments) * c;
    const uint64_t num = static_cast<uint64_t>(scaled > omega ? scaled - omega : omega - scaled);
    const uint64_t den = static_cast<uint64_t>(scaled);
    if (static_cast<u128>(num) * best.denominator > static_cast<u128>(best.numerator) * den) {
      best.numerator = num;
      best.denominator = den;
    }
  }
  best.max_deviation = static_cast<double>(best.numerator) / static_cast<double>(best.denominator);
  return best;
}

bool closeness_within_bound(const Closeness& c, uint64_t omega, unsigned i0) {
  const uint64_t segments = uint64_t{1} << i0;
  if (omega == segments) return c.numerator == 0;
  return static_cast<u128>(c.numerator) * (omega - segments) <= static_cast<u128>(segments) * c.denominator;
}

std::pair<unsigned, unsigned> pair_window(uint64_t omega, unsigned band) {
  return {band + ord_r(omega, 2), segment_cutoff(omega)};
}

IntHistogram pair_bit_diff_stat(const PeriodicFamily& family, unsigned band, unsigned t_lo, unsigned t_hi,
                                uint64_t pair_samples, uint64_t seed) {
  const uint64_t K = family.size();
  if (K < 2) throw DomainError("pair_bit_diff_stat: family needs K >= 2");
  if (t_lo < band || t_lo > t_hi || t_hi - band >= family.n())
    throw DomainError("pair_bit_diff_stat: window must satisfy b <= lo <= hi < n + b");
  IntHistogram hist;
  CounterRng rng(seed, 0x70616972ULL);
  for (uint64_t s = 0; s < pair_samples; ++s) {
    uint64_t k = rng.below(K);
    uint64_t k2 = rng.below(K - 1);
    if (k2 >= k) ++k2;
    const uint64_t diff = family.member(k) ^ family.member(k2);
    uint64_t count = 0;
    for (unsigned i = t_lo; i <= t_hi; ++i) count += (diff >> (i - band)) & 1u;
    ++hist.counts[count];
    ++hist.samples;
  }
  return hist;
}

std::vector<unsigned> retained_indices(const PeriodicFamily& family, uint64_t v, unsigned band) {
  const unsigned d = ord_r(family.omega(), 2);
  const unsigned i0 = std::min<unsigned>(segment_cutoff(family.omega()), family.n());
  std::vector<unsigned> out;
  for (unsigned i = d + band; i <= i0; ++i)
    if ((v >> (family.n() - i)) & 1u) out.push_back(i);
  return out;
}

double retained_noise_sum(const PeriodicFamily& family, uint64_t v, const NoiseConfig& config,
                          const NoiseTape& tape, uint64_t k) {
  if (!is_noisy(config.mode)) throw ConfigError("retained_noise_sum: needs a noisy mode");
  tape.check_matches(family.n(), config);
  const uint64_t u = family.member(k);
  double sum = 0.0;
  for (unsigned i : retained_indices(family, v, config.band))
    if ((u >> (i - config.band)) & 1u) sum += tape.at(family.n() - i, 0);
  return kTwoPi * config.epsilon / std::ldexp(1.0, static_cast<int>(config.band)) * sum;
}

SumSpec retained_sum_spec(const PeriodicFamily& family, uint64_t v, unsigned band, double epsilon, double t,
                          const std::vector<uint64_t>& members) {
  const auto indices = retained_indices(family, v, band);
  std::vector<std::vector<unsigned>> sets;
  sets.reserve(members.size());
  for (uint64_t k : members) {
    const uint64_t u = family.member(k);
    std::vector<unsigned> s;
    for (unsigned i : indices)
      if ((u >> (i - band)) & 1u) s.push_back(family.n() - i);
    sets.push_back(std::move(s));
  }
  return SumSpec(std::ldexp(1.0, static_cast<int>(band)), epsilon, t, family.n(), std::move(sets),
                 std::vector<double>(members.size(), 0.0));
}

}  // namespace shornoise
