#include <doctest.h>

#include <string>

#include "hetsleep/scenario.hpp"

using namespace hetsleep;

TEST_CASE("reference scenario densities") {
  const Scenario s = table2_scenario();
  CHECK_NOTHROW(s.validate());
  CHECK(s.bs_tiers.size() == 2);
  CHECK(s.ue_tiers.size() == 3);
  CHECK(s.ue_density_total() / s.bs_density_total() == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(dbm_to_w(30.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
}

TEST_CASE("json round trip is field-by-field equal") {
  const Scenario s = table2_scenario();
  const Scenario back = scenario_from_json(nlohmann::json::parse(scenario_to_json(s).dump()));
  CHECK(back == s);
}

TEST_CASE("shipped reference file matches the built-in scenario") {
  CHECK(load_scenario_file(HETSLEEP_SCENARIO_DIR "/table2.json") == table2_scenario());
}

TEST_CASE("invariant violations name the field") {
  auto message = [](const nlohmann::json& j) -> std::string {
    try {
      scenario_from_json(j);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  nlohmann::json j = scenario_to_json(table2_scenario());
  j["alpha"] = 1.5;
  CHECK(message(j).find("alpha: must be > 2") != std::string::npos);

  j = scenario_to_json(table2_scenario());
  j["bs_tiers"][1]["antennas"] = 0;
  CHECK(message(j).find("bs_tiers[1].antennas") != std::string::npos);

  j = scenario_to_json(table2_scenario());
  j["bogus"] = 1;
  CHECK(message(j).find("bogus") != std::string::npos);

  j = scenario_to_json(table2_scenario());
  j["ue_tiers"][0]["coupled_bs_tier"] = 9;
  CHECK(message(j).find("valid tiers: 1 2") != std::string::npos);
}

TEST_CASE("unknown tier ids list the valid ones") {
  const Scenario s = table2_scenario();
  CHECK(s.bs_index(2) == 1);
  try {
    s.bs_index(7);
    FAIL("accepted tier 7");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "unknown BS tier 7; valid tiers: 1 2");
  }
}

TEST_CASE("malformed file reports the parse position") {
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ConfigError);
}
