#include "cfjlas/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "cfjlas/measurement.hpp"
#include "cfjlas/solver.hpp"

namespace cfjlas::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One run's raw outcome for one estimator.
struct RunOutcome {
  bool usable = false;       // state available for error metrics
  double pos_sq_err = 0.0;
  double vel_sq_err = 0.0;
  double beta_sq_err = 0.0;
  double omega_sq_err = 0.0;
  StopReason stop_reason = StopReason::Converged;
  int iterations = 0;
  bool failed = false;       // estimator threw
  double seconds = 0.0;
};

struct RunPair {
  RunOutcome cfjlas;
  RunOutcome iterative;
};

void record_errors(RunOutcome& out, const UserState& truth,
                   const UserState& est) {
  out.pos_sq_err = (est.p - truth.p).squaredNorm();
  out.vel_sq_err = (est.v - truth.v).squaredNorm();
  const double db = est.beta - truth.beta;
  const double dw = est.omega - truth.omega;
  out.beta_sq_err = db * db;
  out.omega_sq_err = dw * dw;
  out.usable = true;
}

// Executes fn(run) for run in [0, count) across the requested thread count.
// Results are written into per-run slots, so scheduling cannot change them.
template <typename Fn>
void for_each_run(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int run = 0; run < count; ++run) fn(run);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int run = next.fetch_add(1); run < count;
           run = next.fetch_add(1)) {
        fn(run);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

struct StepSetup {
  double sigma = 0.0;
  double init_error_std = 0.0;
};

StepRecord run_step(const SweepConfig& cfg, const Scenario& scenario,
                    const StepSetup& setup, int step_index) {
  const int runs = cfg.runs_per_step;
  const NoiseModel noise =
      NoiseModel::uniform(scenario.anchor_count(), setup.sigma);

  StepRecord record;
  record.noise_sigma_m = setup.sigma;
  record.init_error_std_m = setup.init_error_std;

  // The bound depends on geometry only (clock parameters do not enter the
  // Jacobian), so one evaluation covers every run of the step.
  UserState representative;
  representative.p = cfg.scenario.truth.position;
  representative.v = cfg.scenario.truth.velocity;
  record.crlb = partition_crlb(crlb(fim(scenario, representative, noise)),
                               scenario.K);

  std::vector<RunPair> outcomes(runs);
  for_each_run(runs, cfg.threads, [&](int run) {
    std::mt19937_64 truth_rng(
        derive_seed(cfg.master_seed, step_index, run, 0));
    const UserState truth =
        cfg.scenario.truth.sample(truth_rng, scenario.c);
    const std::uint64_t meas_seed =
        derive_seed(cfg.master_seed, step_index, run, 1);
    const MeasurementSet meas =
        sample_measurements(scenario, truth, noise, meas_seed);

    RunPair& pair = outcomes[run];
    if (cfg.run_cfjlas) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const EstimationResult res = estimate(scenario, meas);
        pair.cfjlas.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        record_errors(pair.cfjlas, truth, res.theta_refined);
      } catch (const Error&) {
        pair.cfjlas.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        pair.cfjlas.failed = true;
      }
    }
    if (cfg.run_iterative) {
      UserState initial = truth;
      if (cfg.init_mode == InitMode::Perturbed) {
        std::mt19937_64 init_rng(
            derive_seed(cfg.master_seed, step_index, run, 2));
        std::normal_distribution<double> unit(0.0, 1.0);
        for (int k = 0; k < scenario.K; ++k) {
          initial.p(k) += setup.init_error_std * unit(init_rng);
        }
        initial.v.setZero();
        initial.beta = 0.0;
        initial.omega = 0.0;
      }
      const auto t0 = std::chrono::steady_clock::now();
      const IterativeResult res =
          iterate_ml(scenario, meas, initial, cfg.iterative);
      pair.iterative.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      pair.iterative.stop_reason = res.stop_reason;
      pair.iterative.iterations = res.iterations_used;
      record_errors(pair.iterative, truth, res.state);
    }
  });

  const double threshold = 9.0 * record.crlb.pos_bound;
  auto aggregate = [&](bool iterative_kind) {
    EstimatorStats stats;
    stats.runs = runs;
    int mse_count = 0;
    long long iteration_sum = 0;
    int correct = 0;
    for (const RunPair& pair : outcomes) {
      const RunOutcome& out = iterative_kind ? pair.iterative : pair.cfjlas;
      stats.wallclock_s += out.seconds;
      if (iterative_kind) {
        iteration_sum += out.iterations;
        switch (out.stop_reason) {
          case StopReason::Converged:
            ++stats.n_converged;
            break;
          case StopReason::SingularMatrix:
            ++stats.n_singular;
            break;
          case StopReason::IterationCountExceeded:
            ++stats.n_exceeded;
            break;
        }
      }
      if (out.failed) ++stats.n_failed;
      // The baseline's error statistics follow the convergence case only;
      // diverged runs would swamp the average.
      const bool include_in_mse =
          out.usable &&
          (!iterative_kind || out.stop_reason == StopReason::Converged);
      if (include_in_mse) {
        stats.mse.mse_p += out.pos_sq_err;
        stats.mse.mse_v += out.vel_sq_err;
        stats.mse.mse_beta += out.beta_sq_err;
        stats.mse.mse_omega += out.omega_sq_err;
        ++mse_count;
      }
      if (out.usable && out.pos_sq_err < threshold) ++correct;
    }
    if (mse_count > 0) {
      stats.mse.mse_p /= mse_count;
      stats.mse.mse_v /= mse_count;
      stats.mse.mse_beta /= mse_count;
      stats.mse.mse_omega /= mse_count;
    }
    stats.mse.run_count = mse_count;
    stats.correctness_rate =
        runs > 0 ? static_cast<double>(correct) / runs : 0.0;
    if (iterative_kind) {
      stats.mean_iterations =
          runs > 0 ? static_cast<double>(iteration_sum) / runs : 0.0;
      stats.flops_model = stats.mean_iterations *
                          static_cast<double>(flops_iterative_per_iteration(
                              scenario.K, scenario.anchor_count()));
    } else {
      stats.flops_model = static_cast<double>(
          flops_cfjlas(scenario.K, scenario.anchor_count()));
    }
    return stats;
  };

  if (cfg.run_cfjlas) record.cfjlas = aggregate(false);
  if (cfg.run_iterative) record.iterative = aggregate(true);
  return record;
}

void check_config(const SweepConfig& cfg) {
  if (cfg.noise_start > cfg.noise_stop) {
    throw InvalidInput("sweep: noise_start must be <= noise_stop");
  }
  if (!(cfg.noise_start > 0.0)) {
    throw InvalidInput("sweep: noise levels must be positive");
  }
  if (cfg.noise_steps < 1) throw InvalidInput("sweep: noise_steps must be >= 1");
  if (cfg.runs_per_step < 1) {
    throw InvalidInput("sweep: runs_per_step must be >= 1");
  }
  if (!cfg.run_cfjlas && !cfg.run_iterative) {
    throw InvalidInput("sweep: no estimator selected");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t step,
                          std::uint64_t run, std::uint64_t substream) {
  std::uint64_t z = splitmix64(master);
  z = splitmix64(z ^ (0xA24BAED4963EE407ULL + step));
  z = splitmix64(z ^ (0x9FB21C651E98DF25ULL + run));
  return splitmix64(z ^ substream);
}

SweepReport run_sweep(const SweepConfig& cfg) {
  check_config(cfg);
  const Scenario scenario = cfg.scenario.build();
  SweepReport report;
  for (int step = 0; step < cfg.noise_steps; ++step) {
    StepSetup setup;
    setup.sigma =
        cfg.noise_steps == 1
            ? cfg.noise_start
            : cfg.noise_start + (cfg.noise_stop - cfg.noise_start) * step /
                                    (cfg.noise_steps - 1);
    setup.init_error_std =
        cfg.init_mode == InitMode::Perturbed ? cfg.init_error_std : 0.0;
    report.steps.push_back(run_step(cfg, scenario, setup, step));
  }
  return report;
}

SweepReport run_init_error_sweep(const SweepConfig& base, double init_start,
                                 double init_stop, int init_steps,
                                 double sigma) {
  SweepConfig cfg = base;
  cfg.noise_start = sigma;
  cfg.noise_stop = sigma;
  cfg.noise_steps = 1;
  cfg.init_mode = InitMode::Perturbed;
  cfg.run_iterative = true;
  check_config(cfg);
  if (init_steps < 1) {
    throw InvalidInput("sweep: init_steps must be >= 1");
  }
  if (init_start > init_stop || !(init_start >= 0.0)) {
    throw InvalidInput("sweep: init error bounds must be 0 <= start <= stop");
  }
  const Scenario scenario = cfg.scenario.build();
  SweepReport report;
  report.init_error_axis = true;
  for (int step = 0; step < init_steps; ++step) {
    StepSetup setup;
    setup.sigma = sigma;
    setup.init_error_std =
        init_steps == 1
            ? init_start
            : init_start + (init_stop - init_start) * step / (init_steps - 1);
    cfg.init_error_std = setup.init_error_std;
    report.steps.push_back(run_step(cfg, scenario, setup, step));
  }
  return report;
}

}  // namespace cfjlas::sim
