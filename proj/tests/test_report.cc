#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "shornoise/analytic.h"
#include "shornoise/errors.h"
#include "shornoise/report.h"
#include "shornoise/verify.h"

using namespace shornoise;

namespace {

ProbabilityReport sample_report() {
  ProbabilityReport r;
  r.family = PeriodicFamily(6, 5, 2);
  r.config = NoiseConfig{0.5, 2, NoiseMode::full_noise, NoiseDistribution::gaussian_unit, 3};
  r.radius = 1;
  r.table = prob_table(r.family, r.config, draw_tape(6, r.config));
  r.monte_carlo = expected_useful_mass(r.family, r.config, r.radius, 4);
  r.useful_count = useful_set(r.family, r.radius).size();
  r.run_id = run_id_for("simulate", config_json(r.config));
  return r;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("probability report JSON") {
    const auto r = sample_report();
    const auto j = to_json(r);
    CHECK(j["kind"] == "probability_report");
    CHECK(j["family"]["K"] == 13);
    CHECK(j["table"].size() == 64);
    CHECK(std::abs(j["total_mass"].get<double>() - 1) < 1e-9);
    CHECK(j["monte_carlo"]["per_trial"].size() == 4);
    CHECK(j.dump() == to_json(sample_report()).dump());
    CHECK(j.dump().find("_at") == std::string::npos);  // no timestamps in payloads
  }

  TEST_CASE("CSV layout") {
    const auto r = sample_report();
    const auto table = table_csv(r);
    CHECK(table.rfind("v,probability,useful,run_id\n", 0) == 0);
    CHECK(table.find('\r') == std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 65);
    const auto trials = trials_csv(r);
    CHECK(trials.rfind("trial,tape_seed,useful_mass,run_id\n", 0) == 0);
    CHECK(std::count(trials.begin(), trials.end(), '\n') == 5);
    CHECK(trials.find(r.run_id) != std::string::npos);
  }

  TEST_CASE("run ids and numbers") {
    const Json a{{"x", 1}}, b{{"x", 2}};
    CHECK(run_id_for("sweep", a) == run_id_for("sweep", a));
    CHECK(run_id_for("sweep", a) != run_id_for("sweep", b));
    CHECK(run_id_for("sweep", a) != run_id_for("verify", a));
    CHECK(run_id_for("sweep", a).size() == 16);
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
  }

  TEST_CASE("verify suites") {
    CHECK(suite_names().size() == 7);
    CHECK_THROWS_AS(run_suite("nope", 0), ConfigError);
    const auto r = run_suite("closeness", 0);
    CHECK(r.passed());
    CHECK(r.checks >= 50);
    const auto j = to_json(std::vector<SuiteResult>{r}, "abc");
    CHECK(j["passed"] == true);
    CHECK(j["suites"][0]["name"] == "closeness");
  }
}
