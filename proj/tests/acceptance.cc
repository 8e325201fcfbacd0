// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <omp.h>

#include "shornoise/analytic.h"
#include "shornoise/appendix_stats.h"
#include "shornoise/counter_rng.h"
#include "shornoise/lemma_lab.h"
#include "shornoise/numtheory.h"
#include "shornoise/periodic.h"
#include "shornoise/report.h"
#include "shornoise/statevec.h"
#include "shornoise/verify.h"

using namespace shornoise;

namespace {

constexpr uint64_t kSeed = 20240601;

// Tolerances, all fixed here.
constexpr double kUnitarityAnalytic = 1e-9;
constexpr double kUnitarityStatevec = 1e-10;
constexpr double kOracleAgreement = 1e-9;
constexpr double kPeakTolerance = 1e-12;
constexpr double kShorPeakTolerance = 1e-9;
constexpr double kShorRateTarget = 0.5;
constexpr double kShorRateTolerance = 0.08;
constexpr uint64_t kShorTrials = 400;
constexpr double kDestructionRatio = 0.10;
constexpr double kMonotoneSigmas = 3.0;
constexpr uint64_t kDestructionTrials = 200;
constexpr double kCoppersmithRelative = 0.05;
constexpr double kOrd2Slack = 0.10;
constexpr double kOrd2Sigmas = 3.0;

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

NoiseConfig make(NoiseMode mode, double eps, unsigned band, uint64_t seed) {
  return NoiseConfig{eps, band, mode, NoiseDistribution::gaussian_unit, seed};
}

PeriodicFamily random_family(unsigned n, CounterRng& rng) {
  // omega >= 2^(n/2) keeps K <= 2^(n/2) so full tables stay cheap.
  const uint64_t lo = uint64_t{1} << (n / 2);
  const uint64_t w = rng.between(lo, (uint64_t{1} << n) - 1);
  return PeriodicFamily(n, w, rng.below(w));
}

Outcome unitarity() {
  CounterRng rng(kSeed, 1);
  double worst_a = 0, worst_s = 0;
  int cases = 0;
  for (unsigned n : {4u, 8u, 12u, 14u})
    for (NoiseMode mode : kAllModes)
      for (int t = 0; t < 5; ++t) {
        const auto family = random_family(n, rng);
        const auto band = static_cast<unsigned>(rng.between(2, n - 1));
        const auto config = make(mode, 1.0, band, rng.next_u64());
        const auto tape = draw_tape(n, config);
        const auto table = prob_table(family, config, tape);
        worst_a = std::max(worst_a, std::abs(std::accumulate(table.begin(), table.end(), 0.0) - 1));
        const auto state = apply_qft_noisy(prepare_periodic(family), config, tape);
        const auto dist = measure_distribution(state);
        worst_s = std::max(worst_s, std::abs(std::accumulate(dist.begin(), dist.end(), 0.0) - 1));
        ++cases;
      }
  return {worst_a <= kUnitarityAnalytic && worst_s <= kUnitarityStatevec,
          std::to_string(cases) + " tables, max |sum-1| analytic " + fmt(worst_a) + " statevec " + fmt(worst_s)};
}

Outcome oracle_equivalence() {
  CounterRng rng(kSeed, 2);
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<unsigned>(rng.between(3, 12));
    const uint64_t w = rng.between(1, (uint64_t{1} << n) - 1);
    const PeriodicFamily family(n, w, rng.below(w));
    const auto band = static_cast<unsigned>(rng.between(2, n - 1));
    const double eps = 2 * rng.uniform();
    const uint64_t seed = rng.next_u64();
    for (NoiseMode mode : kAllModes) {
      const auto config = make(mode, eps, band, seed);
      const auto tape = draw_tape(n, config);
      const auto sv = measure_distribution(apply_qft_noisy(prepare_periodic(family), config, tape));
      for (uint64_t v = 0; v < family.dimension(); ++v)
        worst = std::max(worst, std::abs(prob_observe(family, v, config, tape) - sv[v]));
    }
  }
  return {worst <= kOracleAgreement, "20 cases x 5 modes, max |analytic - statevec| " + fmt(worst)};
}

Outcome exact_peaks() {
  double worst_on = 0, worst_off = 0;
  const auto exact = make(NoiseMode::exact, 0, 2, 0);
  for (unsigned n : {3u, 6u, 9u, 12u})
    for (unsigned d = 0; d <= n; d += 2) {
      const uint64_t w = uint64_t{1} << d;
      const PeriodicFamily family(n, w, w / 3);
      const auto table = prob_table(family, exact, NoiseTape{});
      const auto sv = measure_distribution(apply_qft_noisy(prepare_periodic(family), exact, NoiseTape{}));
      const uint64_t step = family.dimension() / w;
      for (uint64_t v = 0; v < family.dimension(); ++v) {
        const double want = v % step == 0 ? 1.0 / static_cast<double>(w) : 0.0;
        for (double got : {closed_form_exact(family, v), table[v], sv[v]}) {
          if (v % step == 0)
            worst_on = std::max(worst_on, std::abs(got - want));
          else
            worst_off = std::max(worst_off, got);
        }
      }
    }
  return {worst_on <= kPeakTolerance && worst_off <= kPeakTolerance,
          "max |P - 1/w| on multiples " + fmt(worst_on) + ", max P elsewhere " + fmt(worst_off)};
}

Outcome shor_15_7() {
  const auto exact = make(NoiseMode::exact, 0, 2, 0);
  double worst = 0;
  for (uint64_t u = 0; u < 4; ++u) {
    const auto dist = measure_distribution(apply_qft_noisy(prepare_periodic(PeriodicFamily(8, 4, u)), exact, {}));
    for (uint64_t v = 0; v < 256; ++v) worst = std::max(worst, std::abs(dist[v] - (v % 64 == 0 ? 0.25 : 0.0)));
  }
  const bool period = recover_period(64, 8, 15) == std::optional<uint64_t>{4};
  const auto stats = full_pipeline(15, 7, exact, kSeed, kShorTrials);
  bool factors = true;
  for (const auto& o : stats.outcomes)
    if (o.success) factors = factors && o.factor_a == 3 && o.factor_b == 5;
  const double rate = stats.success_rate();
  const bool ok = worst <= kShorPeakTolerance && period && factors && stats.successes > 0 &&
                  std::abs(rate - kShorRateTarget) <= kShorRateTolerance;
  return {ok, "peak error " + fmt(worst) + ", recover_period(64)=4 " + (period ? "yes" : "no") + ", factors {3,5} " +
                  (factors ? "yes" : "no") + ", success rate " + fmt(rate) + " over " +
                  std::to_string(kShorTrials)};
}

bool non_increasing_within(const std::vector<MonteCarloEstimate>& est) {
  for (size_t i = 0; i + 1 < est.size(); ++i) {
    const double slack = kMonotoneSigmas * std::hypot(est[i].std_error, est[i + 1].std_error);
    if (est[i + 1].mean > est[i].mean + slack) return false;
  }
  return true;
}

std::string destruction_payload;  // criterion 14 reruns one grid point

Outcome noise_destruction() {
  const PeriodicFamily family(20, 1023, 7);
  const std::vector<double> eps{0.0, 0.125, 0.25, 0.5, 1.0};
  bool ok = true;
  std::string detail;
  const double exact_mass = useful_mass(family, make(NoiseMode::exact, 0, 2, 0), NoiseTape{}, 0);
  for (NoiseMode mode : {NoiseMode::full_noise, NoiseMode::single_level, NoiseMode::banded_noisy}) {
    std::vector<MonteCarloEstimate> est;
    for (double e : eps) est.push_back(expected_useful_mass(family, make(mode, e, 2, kSeed), 0, kDestructionTrials));
    const bool drop = est.back().mean < kDestructionRatio * est.front().mean;
    const bool mono = non_increasing_within(est);
    ok = ok && drop && mono;
    detail += std::string(to_string(mode)) + ": ";
    for (const auto& x : est) detail += fmt(x.mean) + " ";
    detail += "(eps=1 stderr " + fmt(est.back().std_error) + ", ratio to own eps=0 " +
              fmt(est.back().mean / est.front().mean) + ", to exact-mode mass " + fmt(est.back().mean / exact_mass) +
              (mono ? ", monotone" : ", NOT monotone") + ") ";
    if (mode == NoiseMode::full_noise) {
      ProbabilityReport r;
      r.family = family;
      r.config = make(mode, 0.5, 2, kSeed);
      r.monte_carlo = est[3];
      destruction_payload = to_json(r).dump();
    }
  }
  return {ok, detail};
}

Outcome coppersmith_banding() {
  const unsigned n = 20;
  const auto b = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(n)))) + 3;
  const PeriodicFamily family(n, 1023, 7);
  const double exact = useful_mass(family, make(NoiseMode::exact, 0, 2, 0), NoiseTape{}, 0);
  const double copp = useful_mass(family, make(NoiseMode::coppersmith, 0, b, 0), NoiseTape{}, 0);
  const double rel = std::abs(copp - exact) / exact;
  return {rel <= kCoppersmithRelative,
          "b=" + std::to_string(b) + " mass " + fmt(copp) + " vs exact " + fmt(exact) + " (rel " + fmt(rel) + ")"};
}

Outcome suites(const std::vector<std::string>& names) {
  bool ok = true;
  std::string detail;
  for (const auto& r : run_suites(names, kSeed)) {
    ok = ok && r.passed();
    detail += r.name + " " + std::to_string(r.checks) + " checks, " + std::to_string(r.failures.size()) + " failed; ";
    for (const auto& f : r.failures) detail += "[" + f + "] ";
  }
  return {ok, detail};
}

Outcome brun_titchmarsh() {
  const auto rows = brun_titchmarsh_sweep(1000000, 3, 1000);
  uint64_t violations = 0;
  for (const auto& r : rows) violations += !r.holds;
  return {violations == 0 && rows.size() == 998,
          std::to_string(rows.size()) + " moduli, " + std::to_string(violations) + " violations"};
}

Outcome rosser_schoenfeld() {
  const auto r = rosser_schoenfeld_check(1000000);
  const uint64_t d = kRosserSchoenfeldExceptional;
  const double plain = rosser_schoenfeld_ratio(d, euler_phi(d), 2.5);
  const double adjusted = rosser_schoenfeld_ratio(d, euler_phi(d), kRosserSchoenfeldExceptionalConstant);
  return {r.violations == 0 && adjusted <= 1.0,
          "d<=10^6: max ratio " + fmt(r.max_ratio) + " at d=" + std::to_string(r.argmax) + ", " +
              std::to_string(r.violations) + " violations; exceptional d ratio " + fmt(plain) + " (2.5), " +
              fmt(adjusted) + " (2.50637)"};
}

Outcome appendix_surveys() {
  bool ok = true;
  std::string detail = "ord2:";
  for (const auto& row : ord2_tail_survey(16, {1, 2, 3, 4, 5, 6})) {
    const double t = row.reference;
    const double sigma = std::sqrt(t * (1 - t) / static_cast<double>(row.primes));
    const bool in = row.probability >= t * (1 - kOrd2Slack) - kOrd2Sigmas * sigma &&
                    row.probability <= t * (1 + kOrd2Slack) + kOrd2Sigmas * sigma;
    ok = ok && in;
    detail += " e" + std::to_string(row.e) + "=" + fmt(row.probability) + (in ? "" : "(out)");
  }
  const std::vector<uint64_t> thresholds{2, 4, 16, 64};
  const auto ratio = order_ratio_survey(16, 500, thresholds, kSeed);
  const auto gcd = gcd_survey(16, 500, thresholds, kSeed);
  const bool mono = non_increasing(ratio.rows) && non_increasing(gcd.rows);
  const bool ids = ratio.identity_failures == 0 && gcd.identity_failures == 0 && ratio.identity_checks >= 500;
  ok = ok && mono && ids;
  detail += std::string("; monotone ") + (mono ? "yes" : "no") + "; identities " +
            std::to_string(ratio.identity_checks + gcd.identity_checks) + " checked, " +
            std::to_string(ratio.identity_failures + gcd.identity_failures) + " failed";
  return {ok, detail};
}

Outcome fouvry() {
  const uint64_t x = 100000;
  uint64_t primes = 0, hits = 0;
  for (uint64_t p = 2; p < x; ++p) {
    bool prime = true;
    for (uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    ++primes;
    if (p == 2) continue;
    uint64_t m = p - 1, largest = 1;
    for (uint64_t d = 2; d * d <= m; ++d)
      while (m % d == 0) {
        largest = d;
        m /= d;
      }
    if (m > 1) largest = m;
    if (largest * largest * largest > p * p) ++hits;
  }
  const auto got = fouvry_density(x);
  return {got.qualifying == hits && got.primes == primes && got.ratio() > 0,
          std::to_string(got.qualifying) + "/" + std::to_string(got.primes) + " = " + fmt(got.ratio()) +
              ", oracle " + std::to_string(hits) + "/" + std::to_string(primes)};
}

Outcome reproducibility() {
  bool ok = true;
  std::string detail;
  {
    const PeriodicFamily family(20, 1023, 7);
    ProbabilityReport r;
    r.family = family;
    r.config = make(NoiseMode::full_noise, 0.5, 2, kSeed);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(2);
    r.monte_carlo = expected_useful_mass(family, r.config, 0, kDestructionTrials);
    omp_set_num_threads(saved);
    const bool same = to_json(r).dump() == destruction_payload;
    ok = ok && same;
    detail += std::string("useful-mass report ") + (same ? "identical" : "DIFFERS");
  }
  {
    const auto a = to_json(run_suites({"lemma22", "ones-count"}, kSeed), "x").dump();
    const auto b = to_json(run_suites({"lemma22", "ones-count"}, kSeed), "x").dump();
    ok = ok && a == b;
    detail += std::string(", verify payload ") + (a == b ? "identical" : "DIFFERS");
  }
  {
    const auto exact = make(NoiseMode::full_noise, 1.0, 2, 0);
    auto run = [&] {
      const auto s = full_pipeline(15, 7, exact, kSeed, 100);
      std::string out;
      for (const auto& o : s.outcomes) out += std::to_string(o.measured_v) + ",";
      return out;
    };
    const bool same = run() == run();
    ok = ok && same;
    detail += std::string(", pipeline samples ") + (same ? "identical" : "DIFFERS");
  }
  {
    const auto a = survey_csv(order_ratio_survey(16, 200, {2, 4}, kSeed).rows, "x");
    const auto b = survey_csv(order_ratio_survey(16, 200, {2, 4}, kSeed).rows, "x");
    ok = ok && a == b;
    detail += std::string(", survey csv ") + (a == b ? "identical" : "DIFFERS");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "unitarity", unitarity},
      {2, "oracle equivalence", oracle_equivalence},
      {3, "exact peaks", exact_peaks},
      {4, "Shor N=15 x=7", shor_15_7},
      {5, "noise destruction trend", noise_destruction},
      {6, "Coppersmith banding", coppersmith_banding},
      {7, "random unit-vector sum bound", [] { return suites({"lemma22", "cos-moment"}); }},
      {8, "bit-segment theorem", [] { return suites({"bit-segment"}); }},
      {9, "distribution closeness", [] { return suites({"closeness"}); }},
      {10, "Brun-Titchmarsh", brun_titchmarsh},
      {11, "Rosser-Schoenfeld", rosser_schoenfeld},
      {12, "appendix surveys", appendix_surveys},
      {13, "Fouvry density", fouvry},
      {14, "reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s [%.1fs] %s\n", c.id, out.passed ? "PASS" : "FAIL", c.name.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
    failed += !out.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
