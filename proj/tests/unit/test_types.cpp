#include <doctest.h>

#include <cmath>

#include "cfjlas/types.hpp"

using namespace cfjlas;

namespace {

Scenario eight_anchor_scenario() {
  Scenario scenario;
  scenario.K = 2;
  for (int i = 0; i < 8; ++i) {
    AnchorNode anchor;
    anchor.id = i + 1;
    anchor.position = Eigen::Vector2d(10.0 * i, i % 2 == 0 ? 5.0 : -5.0);
    anchor.slot_time = 0.005 * i;
    scenario.anchors.push_back(anchor);
  }
  return scenario;
}

}  // namespace

TEST_CASE("to_meter_units converts seconds and ppm") {
  SUBCASE("zero") {
    const auto [beta, omega] = to_meter_units(0.0, 0.0, 299792458.0);
    CHECK(beta == 0.0);
    CHECK(omega == 0.0);
  }
  SUBCASE("offset and skew at the simulation bounds") {
    const auto [beta, omega] = to_meter_units(1e-5, 20.0, 299792458.0);
    CHECK(beta == doctest::Approx(2997.92458).epsilon(1e-12));
    CHECK(omega == doctest::Approx(5995.84916).epsilon(1e-12));
  }
  SUBCASE("sign symmetry") {
    const auto [beta, omega] = to_meter_units(-1e-5, -20.0, 299792458.0);
    CHECK(beta == doctest::Approx(-2997.92458).epsilon(1e-12));
    CHECK(omega == doctest::Approx(-5995.84916).epsilon(1e-12));
  }
  SUBCASE("non-finite rejected") {
    CHECK_THROWS_AS(to_meter_units(std::nan(""), 0.0, 299792458.0),
                    InvalidInput);
    CHECK_THROWS_AS(to_meter_units(0.0, 0.0, -1.0), InvalidInput);
  }
}

TEST_CASE("unit conversion round trip") {
  const double c = 299792458.0;
  for (double beta_s : {1e-5, -3.3e-6, 0.0, 4.2e-5}) {
    for (double omega_ppm : {20.0, -7.5, 0.0, 13.25}) {
      const auto [beta_m, omega_mps] = to_meter_units(beta_s, omega_ppm, c);
      const auto [beta_back, omega_back] =
          from_meter_units(beta_m, omega_mps, c);
      CHECK(beta_back == doctest::Approx(beta_s).epsilon(1e-12));
      CHECK(omega_back == doctest::Approx(omega_ppm).epsilon(1e-12));
    }
  }
}

TEST_CASE("validate_scenario") {
  SUBCASE("valid eight anchor layout passes unchanged") {
    const Scenario scenario = eight_anchor_scenario();
    const Scenario validated = validate_scenario(scenario);
    CHECK(validated.anchor_count() == 8);
    CHECK(validated.anchors[3].position == scenario.anchors[3].position);
    // idempotent
    const Scenario again = validate_scenario(validated);
    CHECK(again.anchors[7].slot_time == validated.anchors[7].slot_time);
  }
  SUBCASE("too few anchors") {
    Scenario scenario = eight_anchor_scenario();
    scenario.anchors.resize(6);  // need 2K+3 = 7
    CHECK_THROWS_AS(validate_scenario(scenario), TooFewAnchors);
  }
  SUBCASE("duplicate slot time") {
    Scenario scenario = eight_anchor_scenario();
    scenario.anchors[2].slot_time = scenario.anchors[1].slot_time;
    CHECK_THROWS_AS(validate_scenario(scenario), NonMonotoneSlots);
  }
  SUBCASE("negative first slot") {
    Scenario scenario = eight_anchor_scenario();
    scenario.anchors[0].slot_time = -0.001;
    CHECK_THROWS_AS(validate_scenario(scenario), NonMonotoneSlots);
  }
  SUBCASE("dimension mismatch names the anchor") {
    Scenario scenario = eight_anchor_scenario();
    scenario.anchors[4].position = Eigen::Vector3d(1.0, 2.0, 3.0);
    try {
      validate_scenario(scenario);
      FAIL("expected DimensionMismatch");
    } catch (const DimensionMismatch& e) {
      CHECK(std::string(e.what()).find("anchor id 5") != std::string::npos);
    }
  }
  SUBCASE("duplicate anchor id") {
    Scenario scenario = eight_anchor_scenario();
    scenario.anchors[5].id = scenario.anchors[0].id;
    CHECK_THROWS_AS(validate_scenario(scenario), InvalidInput);
  }
  SUBCASE("bad K") {
    Scenario scenario = eight_anchor_scenario();
    scenario.K = 4;
    CHECK_THROWS_AS(validate_scenario(scenario), DimensionMismatch);
  }
}

TEST_CASE("UserState vector round trip") {
  UserState state;
  state.p = Eigen::Vector3d(1.0, 2.0, 3.0);
  state.v = Eigen::Vector3d(-0.5, 0.25, 4.0);
  state.beta = 17.0;
  state.omega = -3.0;
  const Eigen::VectorXd theta = state.to_vector();
  REQUIRE(theta.size() == 8);
  const UserState back = UserState::from_vector(theta, 3);
  CHECK(back.p == state.p);
  CHECK(back.v == state.v);
  CHECK(back.beta == state.beta);
  CHECK(back.omega == state.omega);
  CHECK_THROWS_AS(UserState::from_vector(theta, 2), DimensionMismatch);
}
