#pragma once

#include <random>
#include <string>
#include <vector>

#include "cfjlas/types.hpp"

namespace cfjlas::sim {

// Distribution the per-run ground truth is drawn from: fixed position and
// velocity, clock offset and skew uniform within configuration-unit bounds.
struct TruthDistribution {
  Eigen::VectorXd position;    // m
  Eigen::VectorXd velocity;    // m/s
  double beta_low_s = 0.0;     // s
  double beta_high_s = 0.0;    // s
  double omega_low_ppm = 0.0;  // ppm
  double omega_high_ppm = 0.0; // ppm

  UserState sample(std::mt19937_64& rng, double c) const;
};

// Anchor description before the round starts; the estimator-facing position
// is the start position advanced to the anchor's own slot time.
struct AnchorSpec {
  int id = 0;
  Eigen::VectorXd start_position;  // m, at round start
  Eigen::VectorXd velocity;        // m/s
  double clock_offset_s = 0.0;     // s
  double slot_time_s = 0.0;        // s
};

struct ScenarioSpec {
  int K = 2;
  double c = kSpeedOfLight;
  std::vector<AnchorSpec> anchors;
  TruthDistribution truth;

  // Validated estimator scenario with each anchor at its slot-time position.
  Scenario build() const;
};

bool operator==(const AnchorSpec& a, const AnchorSpec& b);
bool operator==(const TruthDistribution& a, const TruthDistribution& b);
bool operator==(const ScenarioSpec& a, const ScenarioSpec& b);

// The built-in 2D formation: eight anchors around one user node, everything
// drifting along +x, 5 ms slot spacing.
ScenarioSpec default_scenario();

// JSON scenario file round trip. Unknown keys are rejected; parse and schema
// problems raise ParseError with the offending field or location.
ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

}  // namespace cfjlas::sim
