#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "shornoise/analytic.h"
#include "shornoise/appendix_stats.h"
#include "shornoise/noise.h"
#include "shornoise/periodic.h"

namespace shornoise {

inline constexpr const char* kArtifactVersion = "0.3.0";

using Json = nlohmann::ordered_json;

/// Observation probabilities for one (family, config) plus the Monte Carlo
/// useful-mass estimate.
struct ProbabilityReport {
  std::string engine = "analytic";  ///< "analytic" or "statevec"
  PeriodicFamily family{1, 1, 0};
  NoiseConfig config;
  uint64_t radius = 0;
  std::vector<double> table;  ///< P(v) for all v; empty when not computed
  uint64_t useful_count = 0;
  double useful_mass_first = 0.0;  ///< useful mass under the trial-0 tape
  MonteCarloEstimate monte_carlo;
  std::string run_id;
};

Json family_json(const PeriodicFamily& family);
Json config_json(const NoiseConfig& config);

/// Deterministic payload: no timestamps, doubles in shortest round-trip form.
Json to_json(const ProbabilityReport& report);

/// "v,probability,useful,run_id" rows for a full table.
std::string table_csv(const ProbabilityReport& report);
/// "trial,tape_seed,useful_mass,run_id" rows.
std::string trials_csv(const ProbabilityReport& report);

/// Survey tables: "threshold,probability,samples,stderr,run_id".
std::string survey_csv(const std::vector<SurveyRow>& rows, const std::string& run_id);

/// Shortest decimal that round-trips the double.
std::string format_double(double x);

/// 16 hex digits of FNV-1a over the canonical dump of (subcommand, config).
std::string run_id_for(const std::string& subcommand, const Json& config);

struct RunManifest {
  std::string subcommand;
  Json config;
  uint64_t master_seed = 0;
  std::string version = kArtifactVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
  std::string run_id;
};

Json to_json(const RunManifest& manifest);

/// ISO-8601 UTC timestamp of now.
std::string utc_timestamp();

}  // namespace shornoise
