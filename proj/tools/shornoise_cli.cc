#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "shornoise/analytic.h"
#include "shornoise/appendix_stats.h"
#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/noise.h"
#include "shornoise/numtheory.h"
#include "shornoise/periodic.h"
#include "shornoise/report.h"
#include "shornoise/statevec.h"
#include "shornoise/verify.h"

namespace fs = std::filesystem;
using namespace shornoise;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

struct Common {
  uint64_t seed = 0;
  std::string out = ".";
  int threads = 0;
};

struct FamilyArgs {
  std::optional<uint64_t> N, x, n, omega, ustar;
};

struct NoiseArgs {
  std::string mode = "exact";
  double epsilon = 0.0;
  unsigned band = 2;
  std::string distribution = "gaussian_unit";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed for every random stream");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)");
}

void add_family(CLI::App* cmd, FamilyArgs& f) {
  auto* N = cmd->add_option("--N", f.N, "Modulus to factor");
  auto* x = cmd->add_option("--x", f.x, "Base with gcd(x, N) = 1");
  auto* n = cmd->add_option("--n", f.n, "Qubit count of a synthetic family");
  auto* w = cmd->add_option("--omega", f.omega, "Period of a synthetic family");
  cmd->add_option("--ustar", f.ustar, "Offset u* in [0, omega); sampled from the seed when omitted");
  N->needs(x);
  x->needs(N);
  n->needs(w);
  w->needs(n);
  N->excludes(n);
  N->excludes(w);
}

void add_noise(CLI::App* cmd, NoiseArgs& a) {
  cmd->add_option("--mode", a.mode, "exact|coppersmith|full_noise|single_level|banded_noisy");
  cmd->add_option("--epsilon", a.epsilon, "Noise strength");
  cmd->add_option("--band", a.band, "Gate level b where noise/deletion starts");
  cmd->add_option("--distribution", a.distribution, "gaussian_unit|uniform_pm1|trit");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Resolved (n, omega, u*) or a factor revealed by gcd(x, N).
struct ResolvedFamily {
  std::optional<PeriodicFamily> family;
  std::optional<uint64_t> revealed;
  Json echo;
};

ResolvedFamily resolve_family(const FamilyArgs& f, uint64_t seed) {
  ResolvedFamily r;
  unsigned n = 0;
  uint64_t omega = 0;
  if (f.N) {
    auto inst = make_instance(*f.N, *f.x);
    if (auto* rev = std::get_if<FactorRevealed>(&inst)) {
      r.revealed = rev->factor;
      r.echo = Json{{"N", *f.N}, {"x", *f.x}};
      return r;
    }
    const auto& s = std::get<ShorInstance>(inst);
    n = s.n;
    omega = s.omega;
    r.echo = Json{{"N", *f.N}, {"x", *f.x}};
  } else if (f.n) {
    if (*f.n < 1 || *f.n > 62) throw ConfigError("--n must be in [1, 62]");
    n = static_cast<unsigned>(*f.n);
    omega = *f.omega;
    r.echo = Json::object();
  } else {
    throw ConfigError("give either --N/--x or --n/--omega");
  }
  if (omega < 1) throw ConfigError("--omega must be >= 1");
  uint64_t ustar = 0;
  if (f.ustar) {
    ustar = *f.ustar;
    if (ustar >= omega) throw ConfigError("--ustar must be < omega");
  } else {
    CounterRng rng(seed, 0x7573746172ULL);
    ustar = rng.below(omega);
  }
  r.family.emplace(n, omega, ustar);
  r.echo["n"] = n;
  r.echo["omega"] = omega;
  r.echo["u_star"] = ustar;
  return r;
}

NoiseConfig make_config(const NoiseArgs& a, uint64_t seed) {
  NoiseConfig c;
  c.mode = parse_mode(a.mode);
  c.distribution = parse_distribution(a.distribution);
  c.epsilon = a.epsilon;
  c.band = a.band;
  c.seed = seed;
  c.validate();
  return c;
}

RunManifest begin_manifest(const std::string& sub, const Json& config, uint64_t seed) {
  RunManifest m;
  m.subcommand = sub;
  m.config = config;
  m.master_seed = seed;
  m.started_at = utc_timestamp();
  m.run_id = run_id_for(sub, config);
  return m;
}

void finish_manifest(RunManifest& m, const fs::path& dir) {
  m.finished_at = utc_timestamp();
  write_file(dir / "manifest.json", dump(to_json(m)));
}

// Useful mass per trial evaluated by the statevector engine.
MonteCarloEstimate statevec_useful_mass(const PeriodicFamily& family, const NoiseConfig& config, uint64_t radius,
                                        uint64_t trials, std::vector<double>& first_table) {
  const auto useful = useful_set(family, radius);
  const bool tape_free = !is_noisy(config.mode) || config.epsilon == 0.0;
  const uint64_t runs = tape_free ? 1 : trials;
  std::vector<double> masses;
  std::vector<uint64_t> seeds;
  for (uint64_t t = 0; t < runs; ++t) {
    NoiseConfig c = config;
    c.seed = trial_tape_seed(config.seed, t);
    const auto tape = draw_tape(family.n(), c);
    const auto dist = measure_distribution(apply_qft_noisy(prepare_periodic(family), c, tape));
    double mass = 0.0;
    for (uint64_t v : useful) mass += dist[v];
    masses.push_back(mass);
    seeds.push_back(c.seed);
    if (t == 0) first_table = dist;
  }
  auto est = summarize(std::move(masses), std::move(seeds));
  if (tape_free) est.trials = trials;
  return est;
}

int cmd_simulate(const FamilyArgs& fa, const NoiseArgs& na, const Common& common, uint64_t trials,
                 std::optional<uint64_t> radius_arg, const std::string& engine) {
  if (engine != "analytic" && engine != "statevec") throw ConfigError("--engine must be analytic or statevec");
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  const auto resolved = resolve_family(fa, common.seed);
  const NoiseConfig config = make_config(na, common.seed);
  const fs::path dir = common.out;
  fs::create_directories(dir);

  Json echo = resolved.echo;
  if (resolved.revealed) {
    echo["factor"] = *resolved.revealed;
    auto manifest = begin_manifest("simulate", echo, common.seed);
    std::cout << "gcd(x, N) = " << *resolved.revealed << " already splits N; no quantum step\n";
    finish_manifest(manifest, dir);
    return 0;
  }
  const auto& family = *resolved.family;
  const uint64_t radius = radius_arg.value_or(default_useful_radius(family.n()));
  if (is_noisy(config.mode) && family.n() <= config.band)
    throw ConfigError("noisy modes need n > band");
  if (engine == "statevec" && family.n() > kMaxSimulatorQubits)
    throw CapacityError("statevec engine supports at most 20 qubits");

  echo["engine"] = engine;
  echo["noise"] = config_json(config);
  echo["trials"] = trials;
  echo["radius"] = radius;
  auto manifest = begin_manifest("simulate", echo, common.seed);

  ProbabilityReport report;
  report.engine = engine;
  report.family = family;
  report.config = config;
  report.radius = radius;
  report.run_id = manifest.run_id;
  report.useful_count = useful_set(family, radius).size();

  if (engine == "statevec") {
    report.monte_carlo = statevec_useful_mass(family, config, radius, trials, report.table);
  } else {
    report.monte_carlo = expected_useful_mass(family, config, radius, trials);
    if (family.n() <= kFullTableMaxQubits) {
      NoiseConfig c = config;
      c.seed = trial_tape_seed(config.seed, 0);
      report.table = prob_table(family, c, draw_tape(family.n(), c));
    }
  }
  report.useful_mass_first = report.monte_carlo.per_trial.front();

  write_file(dir / "report.json", dump(to_json(report)));
  write_file(dir / "trials.csv", trials_csv(report));
  manifest.outputs = {"report.json", "trials.csv"};
  if (!report.table.empty()) {
    write_file(dir / "table.csv", table_csv(report));
    manifest.outputs.push_back("table.csv");
  }
  finish_manifest(manifest, dir);

  std::cout << "family n=" << family.n() << " omega=" << family.omega() << " u*=" << family.u_star()
            << " K=" << family.size() << "\n";
  std::cout << "mode=" << to_string(config.mode) << " epsilon=" << config.epsilon << " band=" << config.band
            << " engine=" << engine << "\n";
  std::cout << "useful mass " << format_double(report.monte_carlo.mean) << " +- "
            << format_double(report.monte_carlo.std_error) << " over " << report.monte_carlo.trials << " trials\n";
  if (!report.table.empty()) {
    std::cout << "peaks (P > 1e-3):";
    int shown = 0;
    for (size_t v = 0; v < report.table.size() && shown < 16; ++v)
      if (report.table[v] > 1e-3) {
        std::cout << ' ' << v << ':' << format_double(report.table[v]);
        ++shown;
      }
    std::cout << "\n";
  }
  return 0;
}

bool non_increasing_within(const std::vector<double>& mean, const std::vector<double>& se) {
  for (size_t i = 0; i + 1 < mean.size(); ++i)
    if (mean[i + 1] > mean[i] + 3 * std::sqrt(se[i] * se[i] + se[i + 1] * se[i + 1])) return false;
  return true;
}

int cmd_sweep(const FamilyArgs& fa, const Common& common, std::vector<double> epsilons, std::vector<unsigned> bands,
              std::vector<std::string> modes, const std::string& distribution, uint64_t trials,
              std::optional<uint64_t> radius_arg) {
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  const auto resolved = resolve_family(fa, common.seed);
  if (resolved.revealed) throw ConfigError("gcd(x, N) > 1: nothing to sweep");
  const auto& family = *resolved.family;
  const uint64_t radius = radius_arg.value_or(default_useful_radius(family.n()));
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<NoiseMode> parsed;
  for (const auto& m : modes) parsed.push_back(parse_mode(m));
  const auto dist = parse_distribution(distribution);
  for (unsigned b : bands)
    if (b < 2 || b >= family.n()) throw ConfigError("every band must satisfy 2 <= b < n");

  Json echo = resolved.echo;
  echo["epsilons"] = epsilons;
  echo["bands"] = bands;
  echo["modes"] = modes;
  echo["distribution"] = distribution;
  echo["trials"] = trials;
  echo["radius"] = radius;
  auto manifest = begin_manifest("sweep", echo, common.seed);

  std::ostringstream csv;
  csv << "mode,band,epsilon,log2_inv_epsilon,mean,stderr,trials,run_id\n";
  std::ostringstream diag_csv;
  diag_csv << "mode,band,non_increasing_3se,mass_ratio_last_first,run_id\n";
  Json rows = Json::array();
  Json diagnostics = Json::array();
  for (NoiseMode mode : parsed) {
    for (unsigned b : bands) {
      std::vector<double> means, ses;
      for (double eps : epsilons) {
        NoiseConfig c{eps, b, mode, dist, common.seed};
        c.validate();
        const auto est = expected_useful_mass(family, c, radius, trials);
        means.push_back(est.mean);
        ses.push_back(est.std_error);
        const std::string log_inv = eps > 0 ? format_double(std::log2(1 / eps)) : "inf";
        csv << to_string(mode) << ',' << b << ',' << format_double(eps) << ',' << log_inv << ','
            << format_double(est.mean) << ',' << format_double(est.std_error) << ',' << est.trials << ','
            << manifest.run_id << '\n';
        rows.push_back(Json{{"mode", to_string(mode)},
                            {"band", b},
                            {"epsilon", eps},
                            {"mean", est.mean},
                            {"stderr", est.std_error},
                            {"trials", est.trials}});
      }
      const bool mono = non_increasing_within(means, ses);
      const double ratio = means.front() > 0 ? means.back() / means.front() : 0.0;
      diag_csv << to_string(mode) << ',' << b << ',' << (mono ? 1 : 0) << ',' << format_double(ratio) << ','
               << manifest.run_id << '\n';
      diagnostics.push_back(
          Json{{"mode", to_string(mode)}, {"band", b}, {"non_increasing_3se", mono}, {"mass_ratio_last_first", ratio}});
    }
  }
  const fs::path dir = common.out;
  fs::create_directories(dir);
  write_file(dir / "sweep.csv", csv.str());
  write_file(dir / "sweep_diagnostics.csv", diag_csv.str());
  Json report{{"kind", "sweep_report"}, {"run_id", manifest.run_id}, {"manifest", "manifest.json"},
              {"family", family_json(family)}, {"radius", radius}, {"trials", trials},
              {"rows", rows}, {"diagnostics", diagnostics}};
  write_file(dir / "sweep.json", dump(report));
  manifest.outputs = {"sweep.csv", "sweep_diagnostics.csv", "sweep.json"};
  finish_manifest(manifest, dir);
  std::cout << csv.str() << diag_csv.str();
  return 0;
}

int cmd_verify(const Common& common, const std::vector<std::string>& suites) {
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite '" + s + "'");
  Json echo{{"suites", suites.empty() ? suite_names() : suites}};
  auto manifest = begin_manifest("verify", echo, common.seed);
  const auto results = run_suites(suites, common.seed);
  const fs::path dir = common.out;
  fs::create_directories(dir);
  write_file(dir / "verify.json", dump(to_json(results, manifest.run_id)));
  manifest.outputs = {"verify.json"};
  finish_manifest(manifest, dir);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks)\n";
    for (const auto& f : r.failures) std::cout << "  " << f << "\n";
    all = all && r.passed();
  }
  return all ? 0 : kExitInvariant;
}

struct SurveyArgs {
  std::string what;
  uint64_t x = 1000000;
  uint64_t dmax = 1000;
  uint64_t xmax = 100000;
  unsigned mbits = 16;
  uint64_t samples = 500;
  std::vector<uint64_t> thresholds = {2, 4, 16, 64};
  std::vector<unsigned> e_values = {1, 2, 3, 4, 5, 6};
};

int cmd_survey(const Common& common, const SurveyArgs& a) {
  Json echo{{"what", a.what}};
  if (a.what == "brun-titchmarsh") {
    echo["x"] = a.x;
    echo["dmax"] = a.dmax;
  } else if (a.what == "rosser-schoenfeld") {
    echo["dmax"] = a.dmax;
  } else if (a.what == "fouvry") {
    echo["xmax"] = a.xmax;
  } else if (a.what == "hss" || a.what == "gcd" || a.what == "per-prime") {
    echo["mbits"] = a.mbits;
    echo["samples"] = a.samples;
    echo["thresholds"] = a.thresholds;
  } else if (a.what == "ord2") {
    echo["mbits"] = a.mbits;
    echo["e_values"] = a.e_values;
  } else {
    throw ConfigError("--what must be brun-titchmarsh|rosser-schoenfeld|fouvry|hss|gcd|per-prime|ord2");
  }
  auto manifest = begin_manifest("survey", echo, common.seed);
  const std::string& id = manifest.run_id;
  std::ostringstream csv;
  Json summary;
  bool ok = true;

  if (a.what == "brun-titchmarsh") {
    if (a.dmax < 3 || a.dmax >= a.x) throw ConfigError("need 3 <= dmax < x");
    const auto rows = brun_titchmarsh_sweep(a.x, 3, a.dmax);
    csv << "d,count,bound,holds,run_id\n";
    uint64_t violations = 0;
    for (const auto& r : rows) {
      csv << r.d << ',' << r.count << ',' << format_double(r.bound) << ',' << (r.holds ? 1 : 0) << ',' << id << '\n';
      if (!r.holds) ++violations;
    }
    summary = Json{{"all_hold", violations == 0}, {"violations", violations}, {"checked", rows.size()}};
    ok = violations == 0;
  } else if (a.what == "rosser-schoenfeld") {
    const auto r = rosser_schoenfeld_check(a.dmax);
    csv << "checked,violations,max_ratio,argmax,run_id\n"
        << r.checked << ',' << r.violations << ',' << format_double(r.max_ratio) << ',' << r.argmax << ',' << id
        << '\n';
    summary = Json{{"all_hold", r.violations == 0}, {"violations", r.violations}, {"max_ratio", r.max_ratio},
                   {"argmax", r.argmax}, {"checked", r.checked}};
    if (a.dmax >= kRosserSchoenfeldExceptional) {
      const uint64_t d = kRosserSchoenfeldExceptional;
      summary["exceptional_ratio"] =
          rosser_schoenfeld_ratio(d, euler_phi(d), kRosserSchoenfeldExceptionalConstant);
    }
    ok = r.violations == 0;
  } else if (a.what == "fouvry") {
    const auto f = fouvry_density(a.xmax);
    csv << "x_max,qualifying,primes,density,run_id\n"
        << a.xmax << ',' << f.qualifying << ',' << f.primes << ',' << format_double(f.ratio()) << ',' << id << '\n';
    summary = Json{{"qualifying", f.qualifying}, {"primes", f.primes}, {"density", f.ratio()}};
  } else if (a.what == "ord2") {
    const auto rows = ord2_tail_survey(a.mbits, a.e_values);
    csv << "e,hits,primes,probability,reference,bt_estimate,run_id\n";
    Json js = Json::array();
    for (const auto& r : rows) {
      csv << r.e << ',' << r.hits << ',' << r.primes << ',' << format_double(r.probability) << ','
          << format_double(r.reference) << ',' << format_double(r.bt_estimate) << ',' << id << '\n';
      js.push_back(Json{{"e", r.e}, {"probability", r.probability}, {"reference", r.reference}});
    }
    summary = Json{{"rows", js}};
  } else {
    SurveyTable t;
    if (a.what == "hss")
      t = order_ratio_survey(a.mbits, a.samples, a.thresholds, common.seed);
    else if (a.what == "gcd")
      t = gcd_survey(a.mbits, a.samples, a.thresholds, common.seed);
    else
      t = per_prime_order_survey(a.mbits, a.samples, a.thresholds, common.seed);
    csv << survey_csv(t.rows, id);
    const bool mono = non_increasing(t.rows);
    summary = Json{{"monotone", mono}, {"identity_failures", t.identity_failures},
                   {"identity_checks", t.identity_checks}};
    ok = t.identity_failures == 0;
  }

  const fs::path dir = common.out;
  fs::create_directories(dir);
  const std::string stem = "survey_" + a.what;
  write_file(dir / (stem + ".csv"), csv.str());
  Json report{{"kind", "survey_report"}, {"run_id", id}, {"manifest", "manifest.json"},
              {"what", a.what}, {"parameters", echo}, {"summary", summary}};
  write_file(dir / (stem + ".json"), dump(report));
  manifest.outputs = {stem + ".csv", stem + ".json"};
  finish_manifest(manifest, dir);
  std::cout << summary.dump() << "\n";
  return ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-QFT period-finding simulator and verification lab"};
  app.require_subcommand(1);

  Common common;
  FamilyArgs fam;
  NoiseArgs noise;
  uint64_t trials = 1;
  std::optional<uint64_t> radius;
  std::string engine = "analytic";

  auto* sim = app.add_subcommand("simulate", "Observation probabilities and useful mass for one configuration");
  add_common(sim, common);
  add_family(sim, fam);
  add_noise(sim, noise);
  sim->add_option("--trials", trials, "Monte Carlo tapes");
  sim->add_option("--radius", radius, "Useful-set radius (default n^2)");
  sim->add_option("--engine", engine, "analytic|statevec");

  FamilyArgs sweep_fam;
  std::vector<double> epsilons = {0.0, 0.125, 0.25, 0.5, 1.0};
  std::vector<unsigned> bands = {2};
  std::vector<std::string> modes = {"full_noise", "single_level", "banded_noisy"};
  std::string sweep_dist = "gaussian_unit";
  uint64_t sweep_trials = 50;
  std::optional<uint64_t> sweep_radius;
  auto* sweep = app.add_subcommand("sweep", "Expected useful mass over an (epsilon, band, mode) grid");
  add_common(sweep, common);
  add_family(sweep, sweep_fam);
  sweep->add_option("--epsilons", epsilons, "Epsilon grid")->delimiter(',');
  sweep->add_option("--bands", bands, "Band grid")->delimiter(',');
  sweep->add_option("--modes", modes, "Mode list")->delimiter(',');
  sweep->add_option("--distribution", sweep_dist, "gaussian_unit|uniform_pm1|trit");
  sweep->add_option("--trials", sweep_trials, "Monte Carlo tapes per grid point");
  sweep->add_option("--radius", sweep_radius, "Useful-set radius (default n^2)");

  std::vector<std::string> suites;
  auto* ver = app.add_subcommand("verify", "Run the lemma verification suites");
  add_common(ver, common);
  ver->add_option("--suite", suites, "Suite name (repeatable; default all)")->delimiter(',');

  SurveyArgs survey_args;
  auto* sur = app.add_subcommand("survey", "Number-theoretic survey tables");
  add_common(sur, common);
  sur->add_option("--what", survey_args.what, "brun-titchmarsh|rosser-schoenfeld|fouvry|hss|gcd|per-prime|ord2")
      ->required();
  sur->add_option("--x", survey_args.x, "Upper limit for prime counts");
  sur->add_option("--dmax", survey_args.dmax, "Largest modulus d");
  sur->add_option("--xmax", survey_args.xmax, "Prime bound for the density");
  sur->add_option("--mbits", survey_args.mbits, "Bit length of sampled primes");
  sur->add_option("--samples", survey_args.samples, "Samples per table");
  sur->add_option("--thresholds", survey_args.thresholds, "Threshold list")->delimiter(',');
  sur->add_option("--e-values", survey_args.e_values, "ord2 exponents")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (common.threads > 0) omp_set_num_threads(common.threads);
    if (*sim) return cmd_simulate(fam, noise, common, trials, radius, engine);
    if (*sweep) return cmd_sweep(sweep_fam, common, epsilons, bands, modes, sweep_dist, sweep_trials, sweep_radius);
    if (*ver) return cmd_verify(common, suites);
    if (*sur) return cmd_survey(common, survey_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
