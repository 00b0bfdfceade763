#include "cfjlas/measurement.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cfjlas {

namespace {

void check_dimensions(const Scenario& scenario, const UserState& state) {
  if (state.dimension() != scenario.K || state.v.size() != state.p.size()) {
    std::ostringstream msg;
    msg << "state dimension (p: " << state.p.size() << ", v: " << state.v.size()
        << ") does not match scenario K=" << scenario.K;
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

Eigen::VectorXd forward_toa(const Scenario& scenario, const UserState& state) {
  check_dimensions(scenario, state);
  const int M = scenario.anchor_count();
  Eigen::VectorXd toa(M);
  for (int i = 0; i < M; ++i) {
    const AnchorNode& a = scenario.anchors[i];
    const double range = (state.p + state.v * a.slot_time - a.position).norm();
    toa(i) = range + state.beta + state.omega * a.slot_time - a.clock_offset;
  }
  return toa;
}

MeasurementSet sample_measurements(const Scenario& scenario,
                                   const UserState& state,
                                   const NoiseModel& noise,
                                   std::uint64_t seed) {
  const int M = scenario.anchor_count();
  if (noise.sigmas.size() != M) {
    std::ostringstream msg;
    msg << "noise model has " << noise.sigmas.size() << " sigmas for " << M
        << " anchors";
    throw DimensionMismatch(msg.str());
  }
  MeasurementSet meas;
  meas.taus = forward_toa(scenario, state);
  meas.noise = noise;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < M; ++i) {
    const double sigma = noise.sigmas(i);
    if (sigma < 0.0 || !std::isfinite(sigma)) {
      throw InvalidInput("sample_measurements: sigma must be finite and >= 0");
    }
    if (sigma > 0.0) {
      meas.taus(i) += sigma * unit(rng);
    }
  }
  return meas;
}

Eigen::VectorXd residuals(const Scenario& scenario, const MeasurementSet& meas,
                          const UserState& state) {
  if (meas.taus.size() != scenario.anchor_count()) {
    std::ostringstream msg;
    msg << "measurement vector has length " << meas.taus.size() << " for "
        << scenario.anchor_count() << " anchors";
    throw DimensionMismatch(msg.str());
  }
  return meas.taus - forward_toa(scenario, state);
}

Eigen::VectorXd wls_weights(const NoiseModel& noise, bool* identity_fallback) {
  bool fallback = false;
  for (int i = 0; i < noise.sigmas.size(); ++i) {
    const double sigma = noise.sigmas(i);
    if (sigma < 0.0 || !std::isfinite(sigma)) {
      throw InvalidInput("wls_weights: sigma must be finite and >= 0");
    }
    if (sigma == 0.0) fallback = true;
  }
  if (identity_fallback != nullptr) *identity_fallback = fallback;
  if (fallback) return Eigen::VectorXd::Ones(noise.sigmas.size());
  return noise.sigmas.array().square().inverse().matrix();
}

double weighted_ssr(const Eigen::VectorXd& r, const NoiseModel& noise,
                    bool* identity_fallback) {
  if (r.size() != noise.sigmas.size()) {
    std::ostringstream msg;
    msg << "residual vector length " << r.size() << " vs " << noise.sigmas.size()
        << " sigmas";
    throw DimensionMismatch(msg.str());
  }
  const Eigen::VectorXd w = wls_weights(noise, identity_fallback);
  return (r.array().square() * w.array()).sum();
}

Eigen::MatrixXd design_matrix(const Scenario& scenario,
                              const UserState& state) {
  check_dimensions(scenario, state);
  const int M = scenario.anchor_count();
  const int K = scenario.K;
  Eigen::MatrixXd J(M, 2 * K + 2);
  for (int i = 0; i < M; ++i) {
    const AnchorNode& a = scenario.anchors[i];
    const Eigen::VectorXd diff = a.position - state.p - state.v * a.slot_time;
    const double range = diff.norm();
    if (range < 1e-9) {
      std::ostringstream msg;
      msg << "range to anchor id " << a.id << " is " << range
          << " m; line of sight undefined";
      throw ZeroRange(msg.str());
    }
    const Eigen::VectorXd los = diff / range;
    J.row(i).head(K) = -los.transpose();
    J.row(i).segment(K, K) = -los.transpose() * a.slot_time;
    J(i, 2 * K) = 1.0;
    J(i, 2 * K + 1) = a.slot_time;
  }
  return J;
}

}  // namespace cfjlas
