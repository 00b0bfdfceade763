#pragma once

#include "cfjlas/types.hpp"

namespace cfjlas {

enum class StopReason { Converged, SingularMatrix, IterationCountExceeded };

const char* to_string(StopReason reason);

struct IterativeOptions {
  int max_iterations = 10;
  double convergence_threshold = 0.01;  // m, on the [dp; dbeta] increment
  double rcond_threshold = 1e-15;
};

struct IterativeResult {
  UserState state;
  StopReason stop_reason = StopReason::IterationCountExceeded;
  int iterations_used = 0;
};

// Plain Gauss-Newton maximum-likelihood baseline, re-linearized each
// iteration. Stops on (a) the position-and-offset increment falling under
// the threshold, (b) a near-singular normal matrix, or (c) the iteration
// budget. Stop reasons are data, not errors: the experiments count them.
IterativeResult iterate_ml(const Scenario& scenario, const MeasurementSet& meas,
                           const UserState& initial,
                           const IterativeOptions& options = {});

}  // namespace cfjlas
