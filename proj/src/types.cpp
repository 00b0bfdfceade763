#include "cfjlas/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace cfjlas {

Eigen::VectorXd UserState::to_vector() const {
  const int K = dimension();
  Eigen::VectorXd theta(2 * K + 2);
  theta.head(K) = p;
  theta.segment(K, K) = v;
  theta(2 * K) = beta;
  theta(2 * K + 1) = omega;
  return theta;
}

UserState UserState::from_vector(const Eigen::VectorXd& theta, int K) {
  if (theta.size() != 2 * K + 2) {
    std::ostringstream msg;
    msg << "parameter vector has length " << theta.size() << ", expected "
        << 2 * K + 2;
    throw DimensionMismatch(msg.str());
  }
  UserState state;
  state.p = theta.head(K);
  state.v = theta.segment(K, K);
  state.beta = theta(2 * K);
  state.omega = theta(2 * K + 1);
  return state;
}

NoiseModel NoiseModel::uniform(int count, double sigma) {
  if (count < 0 || sigma < 0.0 || !std::isfinite(sigma)) {
    throw InvalidInput("NoiseModel::uniform: count and sigma must be >= 0");
  }
  NoiseModel model;
  model.sigmas = Eigen::VectorXd::Constant(count, sigma);
  return model;
}

int minimum_anchor_count(int K) { return 2 * K + 3; }

std::pair<double, double> to_meter_units(double beta_seconds, double omega_ppm,
                                         double c) {
  if (!std::isfinite(beta_seconds) || !std::isfinite(omega_ppm) ||
      !std::isfinite(c)) {
    throw InvalidInput("to_meter_units: non-finite input");
  }
  if (c <= 0.0) {
    throw InvalidInput("to_meter_units: signal speed c must be positive");
  }
  return {beta_seconds * c, omega_ppm * 1e-6 * c};
}

std::pair<double, double> from_meter_units(double beta_m, double omega_mps,
                                           double c) {
  if (!std::isfinite(beta_m) || !std::isfinite(omega_mps) ||
      !std::isfinite(c)) {
    throw InvalidInput("from_meter_units: non-finite input");
  }
  if (c <= 0.0) {
    throw InvalidInput("from_meter_units: signal speed c must be positive");
  }
  return {beta_m / c, omega_mps / c * 1e6};
}

Scenario validate_scenario(Scenario scenario) {
  if (scenario.K != 2 && scenario.K != 3) {
    std::ostringstream msg;
    msg << "Scenario.K is " << scenario.K << ", must be 2 or 3";
    throw DimensionMismatch(msg.str());
  }
  if (!std::isfinite(scenario.c) || scenario.c <= 0.0) {
    throw InvalidInput("Scenario.c must be finite and positive");
  }
  const int M = scenario.anchor_count();
  const int required = minimum_anchor_count(scenario.K);
  if (M < required) {
    std::ostringstream msg;
    msg << "Scenario.anchors has " << M << " entries, need at least "
        << required << " for K=" << scenario.K;
    throw TooFewAnchors(msg.str());
  }
  std::set<int> ids;
  for (int i = 0; i < M; ++i) {
    const AnchorNode& a = scenario.anchors[i];
    if (a.position.size() != scenario.K) {
      std::ostringstream msg;
      msg << "anchor id " << a.id << ": position has dimension "
          << a.position.size() << ", scenario K=" << scenario.K;
      throw DimensionMismatch(msg.str());
    }
    if (!a.position.allFinite() || !std::isfinite(a.clock_offset) ||
        !std::isfinite(a.slot_time)) {
      std::ostringstream msg;
      msg << "anchor id " << a.id << ": non-finite position/clock_offset/slot_time";
      throw InvalidInput(msg.str());
    }
    if (!ids.insert(a.id).second) {
      std::ostringstream msg;
      msg << "duplicate anchor id " << a.id;
      throw InvalidInput(msg.str());
    }
    if (i == 0) {
      if (a.slot_time < 0.0) {
        std::ostringstream msg;
        msg << "anchor id " << a.id << ": slot_time " << a.slot_time << " < 0";
        throw NonMonotoneSlots(msg.str());
      }
    } else if (!(a.slot_time > scenario.anchors[i - 1].slot_time)) {
      std::ostringstream msg;
      msg << "slot_time not strictly increasing at anchor index " << i
          << " (id " << a.id << "): " << scenario.anchors[i - 1].slot_time
          << " -> " << a.slot_time;
      throw NonMonotoneSlots(msg.str());
    }
  }
  return scenario;
}

}  // namespace cfjlas
