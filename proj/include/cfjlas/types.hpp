#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfjlas {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Base class for all library errors. `stage()` is filled in by the estimator
// pipeline so callers can tell which step failed.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  const std::string& stage() const { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  std::string stage_;
};

struct InvalidInput : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct TooFewAnchors : Error {
  using Error::Error;
};
struct NonMonotoneSlots : Error {
  using Error::Error;
};
struct ZeroRange : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct SingularNormalMatrix : Error {
  using Error::Error;
};
struct DegenerateResolvent : Error {
  using Error::Error;
};
struct NoRealSolution : Error {
  using Error::Error;
};
struct NoCandidates : Error {
  using Error::Error;
};
struct SingularFim : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

// Unknown parameters of one user node at the start of a TDMA round.
// Everything is kept in meter units: clock offset and skew are pre-multiplied
// by the signal speed so all matrix entries share one scale.
struct UserState {
  Eigen::VectorXd p;   // position, m
  Eigen::VectorXd v;   // velocity, m/s
  double beta = 0.0;   // clock offset, m
  double omega = 0.0;  // clock skew, m/s

  int dimension() const { return static_cast<int>(p.size()); }

  // Stacked parameter vector [p; v; beta; omega], length 2K+2.
  Eigen::VectorXd to_vector() const;
  static UserState from_vector(const Eigen::VectorXd& theta, int K);
};

// One transmitter: position at its own slot time, known clock offset, and
// the slot time measured from the round start.
struct AnchorNode {
  int id = 0;
  Eigen::VectorXd position;   // m, at slot_time
  double clock_offset = 0.0;  // m
  double slot_time = 0.0;     // s
};

struct Scenario {
  std::vector<AnchorNode> anchors;  // ordered by slot time
  int K = 2;                        // spatial dimension, 2 or 3
  double c = kSpeedOfLight;         // signal speed, m/s

  int anchor_count() const { return static_cast<int>(anchors.size()); }
};

// Independent per-measurement Gaussian noise, diagonal covariance.
struct NoiseModel {
  Eigen::VectorXd sigmas;  // standard deviations, m

  static NoiseModel uniform(int count, double sigma);
};

// One TDMA round of sequential TOA observations, in meters.
struct MeasurementSet {
  Eigen::VectorXd taus;
  NoiseModel noise;
};

// Fewest anchors for which the differenced linear system can have full
// column rank: M - 1 rows must cover 2K + 2 unknowns plus the two
// intermediate variables.
int minimum_anchor_count(int K);

// Boundary conversions between configuration units (seconds, ppm) and the
// internal meter units.
std::pair<double, double> to_meter_units(double beta_seconds, double omega_ppm,
                                         double c);
std::pair<double, double> from_meter_units(double beta_m, double omega_mps,
                                           double c);

// Checks every Scenario invariant and returns the scenario unchanged.
// Throws DimensionMismatch, TooFewAnchors, NonMonotoneSlots or InvalidInput
// naming the offending field.
Scenario validate_scenario(Scenario scenario);

}  // namespace cfjlas
