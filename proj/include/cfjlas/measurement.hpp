#pragma once

#include <cstdint>

#include "cfjlas/types.hpp"

namespace cfjlas {

// Noise-free sequential TOA vector, meters:
//   h_i(theta) = ||p + v t_i - p_i|| + beta + omega t_i - beta_i.
Eigen::VectorXd forward_toa(const Scenario& scenario, const UserState& state);

// forward_toa plus independent zero-mean Gaussian noise. Deterministic for a
// given seed.
MeasurementSet sample_measurements(const Scenario& scenario,
                                   const UserState& state,
                                   const NoiseModel& noise,
                                   std::uint64_t seed);

// r = taus - h(state), meters.
Eigen::VectorXd residuals(const Scenario& scenario, const MeasurementSet& meas,
                          const UserState& state);

// r^T C^-1 r with C = diag(sigma_i^2). If any sigma is zero the weighting
// falls back to identity; `identity_fallback` reports when that happened.
double weighted_ssr(const Eigen::VectorXd& r, const NoiseModel& noise,
                    bool* identity_fallback = nullptr);

// M x (2K+2) Jacobian of h at `state`; row i is [-l_i^T, -l_i^T t_i, 1, t_i]
// with l_i the unit line-of-sight vector toward anchor i at its slot time.
// Throws ZeroRange when the state coincides with an anchor.
Eigen::MatrixXd design_matrix(const Scenario& scenario,
                              const UserState& state);

// Inverse-variance weights used by the WLS steps; identity when any sigma
// is zero.
Eigen::VectorXd wls_weights(const NoiseModel& noise,
                            bool* identity_fallback = nullptr);

}  // namespace cfjlas
