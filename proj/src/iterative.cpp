#include "cfjlas/iterative.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "cfjlas/measurement.hpp"
#include "cfjlas/solver.hpp"

namespace cfjlas {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged:
      return "converged";
    case StopReason::SingularMatrix:
      return "singular_matrix";
    case StopReason::IterationCountExceeded:
      return "iteration_count_exceeded";
  }
  return "unknown";
}

IterativeResult iterate_ml(const Scenario& scenario, const MeasurementSet& meas,
                           const UserState& initial,
                           const IterativeOptions& options) {
  if (options.max_iterations < 0 || options.convergence_threshold <= 0.0 ||
      options.rcond_threshold <= 0.0) {
    throw InvalidInput("iterate_ml: options must be positive");
  }
  if (initial.dimension() != scenario.K) {
    throw DimensionMismatch("iterate_ml: initial state dimension mismatch");
  }
  const int K = scenario.K;
  const Eigen::VectorXd w = wls_weights(meas.noise);

  UserState state = initial;
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    Eigen::MatrixXd J;
    try {
      J = design_matrix(scenario, state);
    } catch (const ZeroRange&) {
      // Landing on an anchor leaves the linearization undefined; the normal
      // matrix would be singular there.
      return {state, StopReason::SingularMatrix, iteration - 1};
    }
    const Eigen::MatrixXd normal = J.transpose() * w.asDiagonal() * J;
    Eigen::MatrixXd normal_inv;
    const double rcond = rcond_1norm(normal, &normal_inv);
    if (!(rcond >= options.rcond_threshold)) {
      return {state, StopReason::SingularMatrix, iteration - 1};
    }
    const Eigen::VectorXd r = residuals(scenario, meas, state);
    const Eigen::VectorXd delta =
        normal_inv * (J.transpose() * (w.asDiagonal() * r));
    if (!delta.allFinite()) {
      return {state, StopReason::SingularMatrix, iteration - 1};
    }
    state.p += delta.head(K);
    state.v += delta.segment(K, K);
    state.beta += delta(2 * K);
    state.omega += delta(2 * K + 1);

    // Convergence is judged on position and clock offset only.
    const double increment =
        std::sqrt(delta.head(K).squaredNorm() + delta(2 * K) * delta(2 * K));
    if (increment < options.convergence_threshold) {
      return {state, StopReason::Converged, iteration};
    }
  }
  return {state, StopReason::IterationCountExceeded, options.max_iterations};
}

}  // namespace cfjlas
