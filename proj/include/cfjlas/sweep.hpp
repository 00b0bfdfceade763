#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfjlas/analysis.hpp"
#include "cfjlas/iterative.hpp"
#include "cfjlas/scenario.hpp"

namespace cfjlas::sim {

enum class InitMode { GroundTruth, Perturbed };

struct SweepConfig {
  ScenarioSpec scenario;
  double noise_start = 0.1;  // m
  double noise_stop = 3.0;   // m
  int noise_steps = 11;
  int runs_per_step = 2000;
  std::uint64_t master_seed = 42;
  bool run_cfjlas = true;
  bool run_iterative = true;
  InitMode init_mode = InitMode::GroundTruth;
  double init_error_std = 0.0;  // m, per coordinate, Perturbed mode
  IterativeOptions iterative;
  int threads = 1;
};

// Per-step, per-estimator aggregate. MSEs cover the runs the estimator
// produced a usable state for (converged runs for the baseline); correctness
// counts every run against 9x the position bound.
struct EstimatorStats {
  int runs = 0;
  MseRecord mse;
  double correctness_rate = 0.0;
  int n_converged = 0;
  int n_singular = 0;
  int n_exceeded = 0;
  int n_failed = 0;
  double wallclock_s = 0.0;
  double flops_model = 0.0;
  double mean_iterations = 0.0;
};

struct StepRecord {
  double noise_sigma_m = 0.0;
  double init_error_std_m = 0.0;
  CrlbPartition crlb;
  std::optional<EstimatorStats> cfjlas;
  std::optional<EstimatorStats> iterative;
};

struct SweepReport {
  std::vector<StepRecord> steps;
  bool init_error_axis = false;  // steps vary the initial position error
};

// Runs the Monte-Carlo sweep over the noise grid. Per-run seeds derive from
// (master_seed, step, run), so reports are identical for any thread count.
// Estimator failures are counted, never propagated.
SweepReport run_sweep(const SweepConfig& config);

// Fixed measurement noise, sweeping the initial-position error of the
// baseline from init_start to init_stop.
SweepReport run_init_error_sweep(const SweepConfig& base, double init_start,
                                 double init_stop, int init_steps,
                                 double sigma);

// Deterministic per-run seed stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t step,
                          std::uint64_t run, std::uint64_t substream);

}  // namespace cfjlas::sim
