#include "shornoise/verify.h"

#include <bit>
#include <cfloat>
#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "shornoise/analytic.h"
#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/lemma_lab.h"
#include "shornoise/numtheory.h"

namespace shornoise {

namespace {

using u128 = unsigned __int128;
constexpr double kTwoPi = 6.283185307179586476925286766559;
// Monte Carlo comparisons use one z threshold for the whole run. Several suites hold
// dozens of checks against tight bounds, and 3 sigma fails a few percent of seeds.
constexpr double kSigmas = 4.5;

void expect(SuiteResult& r, bool ok, const std::string& what) {
  ++r.checks;
  if (!ok) r.failures.push_back(what);
}

std::string fmt(double x) { return format_double(x); }

SuiteResult bit_segment_suite(uint64_t) {
  SuiteResult r;
  r.name = "bit-segment";
  uint64_t mismatches = 0, compared = 0;
  for (uint64_t omega = 1; omega <= 1000; ++omega) {
    const unsigned i0 = segment_cutoff(omega);
    for (unsigned n = 1; n <= 16; ++n) {
      const unsigned top = std::min(i0, n);
      for (uint64_t j = 0; j < omega; ++j) {
        const uint64_t v = (j << n) / omega;
        for (unsigned i = 1; i <= top; ++i) {
          ++compared;
          const bool bit = (v >> (n - i)) & 1u;
          if (bit_from_segment(j, omega, n, i) != bit) {
            if (++mismatches <= 10)
              r.failures.push_back("mismatch omega=" + std::to_string(omega) + " n=" + std::to_string(n) +
                                   " j=" + std::to_string(j) + " i=" + std::to_string(i));
          }
        }
      }
    }
  }
  r.checks = compared;
  r.details = Json{{"omega_max", 1000}, {"n_max", 16}, {"compared", compared}, {"mismatches", mismatches}};
  return r;
}

SuiteResult lemma22_suite(uint64_t seed) {
  SuiteResult r;
  r.name = "lemma22";
  constexpr unsigned kUniverse = 64;
  constexpr uint64_t kTrials = 4000;
  constexpr double kM = 4.0;
  Json rows = Json::array();
  uint64_t case_index = 0;
  for (uint64_t K : {2u, 8u, 32u}) {
    for (double t : {0.5, 1.0, 2.0}) {
      // sigma = m: every pair separated; sigma = m/4: roughly half; sigma = m/16: none.
      for (double sigma : {4.0, 1.0, 0.25}) {
        CounterRng rng(derive_seed(seed, case_index), 0x6c656d6dULL);
        std::vector<std::vector<unsigned>> sets(K);
        std::vector<double> offsets(K);
        for (uint64_t k = 0; k < K; ++k) {
          for (unsigned i = 0; i < kUniverse; ++i)
            if (rng.next_u64() >> 63) sets[k].push_back(i);
          offsets[k] = kTwoPi * rng.uniform();
        }
        SumSpec spec(kM, sigma, t, kUniverse, std::move(sets), std::move(offsets));
        const auto est = expected_sq_norm_mc(spec, kTrials, derive_seed(seed ^ 0x5eedULL, case_index));
        const double bound = lemma22_bound(K, spec.delta(), t);
        const double k2 = static_cast<double>(K * K);
        const std::string tag = "K=" + std::to_string(K) + " t=" + fmt(t) + " sigma/m=" + fmt(sigma / kM);
        expect(r, est.mean <= bound + kSigmas * est.std_error,
               tag + ": mean " + fmt(est.mean) + " > bound " + fmt(bound) + " + z*" + fmt(est.std_error));
        // |sum of K unit vectors|^2 <= K^2 up to the rounding of K polar additions.
        expect(r, est.max_trial <= k2 * (1 + 4 * static_cast<double>(K) * DBL_EPSILON),
               tag + ": trial square norm " + fmt(est.max_trial) + " exceeds K^2");
        rows.push_back(Json{{"K", K},
                            {"t", t},
                            {"sigma_over_m", sigma / kM},
                            {"delta", spec.delta()},
                            {"mean", est.mean},
                            {"stderr", est.std_error},
                            {"bound", bound},
                            {"max_trial", est.max_trial}});
        ++case_index;
      }
    }
  }
  // K = 2 closed form with one Gaussian in one set.
  {
    const double phi1 = 0.7;
    SumSpec spec(kTwoPi, 1.0, 0.0, 2, {{1}, {}}, {phi1, 0.0});
    const auto est = expected_sq_norm_mc(spec, 200000, derive_seed(seed, 1000));
    const double target = 2 + 2 * std::exp(-0.5) * std::cos(phi1);
    expect(r, std::abs(est.mean - target) <= kSigmas * est.std_error,
           "two-vector closed form: mean " + fmt(est.mean) + " vs " + fmt(target));
    rows.push_back(Json{{"K", 2}, {"closed_form", target}, {"mean", est.mean}, {"stderr", est.std_error}});
  }
  // Coherent sum: empty sets and zero offsets give K^2 every trial.
  {
    SumSpec spec(4.0, 1.0, 1.0, 8, std::vector<std::vector<unsigned>>(8), std::vector<double>(8, 0.0));
    const auto est = expected_sq_norm_mc(spec, 100, seed);
    expect(r, est.mean == 64.0 && est.max_trial == 64.0, "coherent sum is not exactly K^2");
  }
  r.details = Json{{"trials", kTrials}, {"m", kM}, {"universe", kUniverse}, {"cases", rows}};
  return r;
}

SuiteResult cos_moment_suite(uint64_t seed) {
  SuiteResult r;
  r.name = "cos-moment";
  Json rows = Json::array();
  uint64_t idx = 0;
  for (double sigma : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const auto c = cos_moment_check(sigma, 200000, derive_seed(seed, idx++));
    expect(r, std::abs(c.mc_mean - c.analytic) <= kSigmas * c.std_error,
           "sigma=" + fmt(sigma) + ": " + fmt(c.mc_mean) + " vs " + fmt(c.analytic));
    rows.push_back(Json{{"sigma", sigma}, {"mc_mean", c.mc_mean}, {"stderr", c.std_error}, {"analytic", c.analytic}});
  }
  const auto zero = cos_moment_check(0.0, 100, seed);
  expect(r, zero.mc_mean == 1.0 && zero.analytic == 1.0, "sigma=0 is not exactly 1");
  r.details = Json{{"trials", 200000}, {"rows", rows}};
  return r;
}

std::vector<std::pair<uint64_t, unsigned>> closeness_cases() {
  std::vector<std::pair<uint64_t, unsigned>> cases;
  const uint64_t omegas[] = {1000,    1023,         (1u << 20) + 1, 59049, 999983, 12345, 65535,
                             1u << 12, (1u << 16) + 3, 3000017, 77777, 4097,   1u << 20, 123456789,
                             30030,   510510,       9699690};
  for (uint64_t w : omegas) {
    const unsigned cut = segment_cutoff(w);
    for (unsigned i0 : {1u, (cut + 1) / 2, cut}) {
      if (cases.size() == 50) return cases;
      if (std::find(cases.begin(), cases.end(), std::pair{w, i0}) == cases.end()) cases.emplace_back(w, i0);
    }
  }
  // Powers of two where the deviation must be zero.
  for (unsigned i0 = 1; cases.size() < 50; ++i0) cases.emplace_back(uint64_t{1} << i0, i0);
  return cases;
}

SuiteResult closeness_suite(uint64_t) {
  SuiteResult r;
  r.name = "closeness";
  Json rows = Json::array();
  for (auto [omega, i0] : closeness_cases()) {
    const auto c = distribution_closeness(omega, i0);
    const bool ok = closeness_within_bound(c, omega, i0);
    expect(r, ok, "omega=" + std::to_string(omega) + " i0=" + std::to_string(i0) + ": deviation " +
                      std::to_string(c.numerator) + "/" + std::to_string(c.denominator) + " above bound");
    if (std::has_single_bit(omega) && (uint64_t{1} << i0) <= omega)
      expect(r, c.numerator == 0, "power-of-two omega=" + std::to_string(omega) + " has nonzero deviation");
    rows.push_back(Json{{"omega", omega},
                        {"i0", i0},
                        {"numerator", c.numerator},
                        {"denominator", c.denominator},
                        {"deviation", c.max_deviation}});
  }
  r.details = Json{{"cases", rows}};
  return r;
}

SuiteResult ones_count_suite(uint64_t seed) {
  SuiteResult r;
  r.name = "ones-count";
  Json details;
  {
    const auto h = ones_count_stat(1023, 24, 1, 7, 0, seed);
    const double width = 7.0;
    const double sd = std::sqrt(width / 4 / static_cast<double>(h.samples));
    expect(r, std::abs(h.mean() - width / 2) <= kSigmas * sd, "omega=1023 J=[1,7]: mean " + fmt(h.mean()));
    details["omega_1023"] = Json{{"mean", h.mean()}, {"samples", h.samples}, {"fraction_below_quarter", h.fraction_below(width / 4)}};
  }
  {
    // omega = 2^12: the window bits are the top bits of j itself.
    const unsigned m = 12, n = 16, cut = segment_cutoff(uint64_t{1} << m);
    const auto h = ones_count_stat(uint64_t{1} << m, n, 1, cut, 0, seed);
    std::map<uint64_t, uint64_t> oracle;
    for (uint64_t j = 0; j < (uint64_t{1} << m); ++j) ++oracle[std::popcount(j >> (m - cut))];
    expect(r, h.counts == oracle, "omega=2^12: histogram differs from popcount of the top bits");
  }
  {
    const uint64_t omega = (uint64_t{1} << 24) + 1;
    Json rows = Json::array();
    double prev = 2.0;
    for (unsigned width : {8u, 12u, 16u}) {
      const auto h = ones_count_stat(omega, 48, 1, width, 200000, derive_seed(seed, width));
      const double f = h.fraction_below(width / 4.0);
      expect(r, f < prev, "fraction below |J|/4 did not decay at |J|=" + std::to_string(width));
      prev = f;
      rows.push_back(Json{{"width", width}, {"fraction_below_quarter", f}, {"mean", h.mean()}, {"samples", h.samples}});
    }
    details["decay"] = rows;
  }
  r.details = details;
  return r;
}

SuiteResult pair_diff_suite(uint64_t seed) {
  SuiteResult r;
  r.name = "pair-diff";
  Json details;
  constexpr uint64_t kPairs = 200000;
  {
    PeriodicFamily family(24, 1023, 7);
    const auto [lo, hi] = pair_window(1023, 3);
    const auto h = pair_bit_diff_stat(family, 3, lo, hi, kPairs, seed);
    const double width = hi - lo + 1;
    const double sd = std::sqrt(width / 4 / static_cast<double>(h.samples));
    expect(r, std::abs(h.mean() - width / 2) <= kSigmas * sd,
           "omega=1023 b=3: mean " + fmt(h.mean()) + " vs " + fmt(width / 2));
    details["omega_1023"] = Json{{"window", {lo, hi}}, {"mean", h.mean()}, {"samples", h.samples}};
  }
  {
    // omega = 2^8: bits below ord2(omega) are shared by every member.
    PeriodicFamily family(16, 256, 5);
    const auto h = pair_bit_diff_stat(family, 2, 2, 9, 1000, seed);
    expect(r, h.counts.size() == 1 && h.counts.begin()->first == 0,
           "omega=2^8: low bits differ between members");
  }
  {
    const uint64_t omega = (uint64_t{1} << 24) + 1;
    PeriodicFamily family(48, omega, 3);
    Json rows = Json::array();
    double prev = 2.0;
    for (unsigned width : {8u, 12u, 16u}) {
      const auto h = pair_bit_diff_stat(family, 2, 2, 1 + width, kPairs, derive_seed(seed, width));
      const double f = h.fraction_below(width / 4.0);
      expect(r, f < prev, "fraction below |T|/4 did not decay at |T|=" + std::to_string(width));
      prev = f;
      rows.push_back(Json{{"width", width}, {"fraction_below_quarter", f}, {"mean", h.mean()}});
    }
    details["decay"] = rows;
  }
  r.details = details;
  return r;
}

SuiteResult retained_suite(uint64_t seed) {
  SuiteResult r;
  r.name = "retained";
  const unsigned n = 20;
  PeriodicFamily family(n, 1023, 7);
  NoiseConfig full{1.0, 2, NoiseMode::full_noise, NoiseDistribution::gaussian_unit, seed};
  NoiseConfig single = full;
  single.mode = NoiseMode::single_level;
  const auto full_tape = draw_tape(n, full);
  const auto single_tape = draw_tape(n, single);
  double worst = 0.0;
  Json deltas = Json::array();
  CounterRng rng(seed, 0x726574ULL);
  for (uint64_t j : {1u, 5u, 100u, 511u, 1000u}) {
    const uint64_t v = floor_multiple(n, 1023, j);
    // Only the window bits of v, so noise_phase sees exactly the retained sweeps.
    uint64_t masked = 0;
    for (unsigned i : retained_indices(family, v, full.band)) masked |= uint64_t{1} << (n - i);
    for (int rep = 0; rep < 8; ++rep) {
      const uint64_t k = rng.below(family.size());
      const double got = retained_noise_sum(family, v, full, full_tape, k);
      const double oracle = kTwoPi * noise_phase(family.member(k), masked, n, single, single_tape);
      worst = std::max(worst, std::abs(got - oracle));
      expect(r, std::abs(got - oracle) <= 1e-12,
             "j=" + std::to_string(j) + " k=" + std::to_string(k) + ": " + fmt(got) + " vs " + fmt(oracle));
    }
    std::vector<uint64_t> members;
    for (int i = 0; i < 32; ++i) members.push_back(rng.below(family.size()));
    const auto spec = retained_sum_spec(family, v, full.band, full.epsilon, 0.25, members);
    deltas.push_back(Json{{"j", j}, {"retained", retained_indices(family, v, full.band).size()}, {"delta", spec.delta()}});
  }
  expect(r, retained_noise_sum(family, 0, full, full_tape, 0) == 0.0, "v=0 retained sum is not zero");
  r.details = Json{{"max_abs_difference", worst}, {"premise", deltas}};
  return r;
}

using SuiteFn = std::function<SuiteResult(uint64_t)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"bit-segment", bit_segment_suite}, {"lemma22", lemma22_suite},     {"cos-moment", cos_moment_suite},
      {"closeness", closeness_suite},     {"ones-count", ones_count_suite}, {"pair-diff", pair_diff_suite},
      {"retained", retained_suite}};
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, uint64_t seed) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(seed);
  throw ConfigError("unknown suite '" + std::string(name) + "'");
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& name : names.empty() ? suite_names() : names) out.push_back(run_suite(name, seed));
  return out;
}

Json to_json(const std::vector<SuiteResult>& results, const std::string& run_id) {
  Json suites = Json::array();
  bool all = true;
  for (const auto& res : results) {
    all = all && res.passed();
    suites.push_back(Json{{"name", res.name},
                          {"passed", res.passed()},
                          {"checks", res.checks},
                          {"failures", res.failures},
                          {"details", res.details}});
  }
  return Json{{"kind", "verify_report"}, {"run_id", run_id}, {"manifest", "manifest.json"}, {"passed", all}, {"suites", suites}};
}

}  // namespace shornoise
