#include "shornoise/report.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "shornoise/periodic.h"

namespace shornoise {

std::string format_double(double x) {
  // nlohmann's serializer emits the shortest round-trip representation.
  return nlohmann::json(x).dump();
}

Json family_json(const PeriodicFamily& family) {
  return Json{{"n", family.n()}, {"omega", family.omega()}, {"u_star", family.u_star()}, {"K", family.size()}};
}

Json config_json(const NoiseConfig& config) {
  return Json{{"mode", to_string(config.mode)},
              {"epsilon", config.epsilon},
              {"band", config.band},
              {"distribution", to_string(config.distribution)},
              {"seed", config.seed}};
}

Json to_json(const ProbabilityReport& report) {
  Json j;
  j["kind"] = "probability_report";
  j["run_id"] = report.run_id;
  j["manifest"] = "manifest.json";
  j["engine"] = report.engine;
  j["family"] = family_json(report.family);
  j["config"] = config_json(report.config);
  j["radius"] = report.radius;
  if (!report.table.empty()) {
    double total = 0.0;
    for (double p : report.table) total += p;
    j["table"] = report.table;
    j["total_mass"] = total;
  } else {
    j["table"] = nullptr;
    j["total_mass"] = nullptr;
  }
  j["useful"] = Json{{"count", report.useful_count}, {"mass_first_tape", report.useful_mass_first}};
  const auto& mc = report.monte_carlo;
  j["monte_carlo"] = Json{{"mean", mc.mean},
                          {"stderr", mc.std_error},
                          {"stderr_defined", mc.stderr_defined},
                          {"trials", mc.trials},
                          {"per_trial", mc.per_trial},
                          {"tape_seeds", mc.trial_seeds}};
  return j;
}

std::string table_csv(const ProbabilityReport& report) {
  std::ostringstream out;
  out << "v,probability,useful,run_id\n";
  const auto useful = useful_set(report.family, report.radius);
  size_t next = 0;
  for (size_t v = 0; v < report.table.size(); ++v) {
    bool is_useful = next < useful.size() && useful[next] == v;
    if (is_useful) ++next;
    out << v << ',' << format_double(report.table[v]) << ',' << (is_useful ? 1 : 0) << ',' << report.run_id << '\n';
  }
  return out.str();
}

std::string trials_csv(const ProbabilityReport& report) {
  std::ostringstream out;
  out << "trial,tape_seed,useful_mass,run_id\n";
  const auto& mc = report.monte_carlo;
  for (size_t i = 0; i < mc.per_trial.size(); ++i) {
    out << i << ',' << (i < mc.trial_seeds.size() ? mc.trial_seeds[i] : 0) << ',' << format_double(mc.per_trial[i])
        << ',' << report.run_id << '\n';
  }
  return out.str();
}

std::string survey_csv(const std::vector<SurveyRow>& rows, const std::string& run_id) {
  std::ostringstream out;
  out << "threshold,probability,samples,stderr,run_id\n";
  for (const auto& r : rows)
    out << format_double(r.threshold) << ',' << format_double(r.probability) << ',' << r.samples << ','
        << format_double(r.std_error) << ',' << run_id << '\n';
  return out.str();
}

std::string run_id_for(const std::string& subcommand, const Json& config) {
  const std::string canonical = subcommand + "\n" + config.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const RunManifest& m) {
  return Json{{"kind", "manifest"},       {"run_id", m.run_id},           {"subcommand", m.subcommand},
              {"version", m.version},     {"master_seed", m.master_seed}, {"config", m.config},
              {"started_at", m.started_at}, {"finished_at", m.finished_at}, {"outputs", m.outputs}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace shornoise
