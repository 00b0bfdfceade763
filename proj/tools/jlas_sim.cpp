// Monte-Carlo simulation CLI for the joint localization and synchronization
// estimators: noise sweeps, initial-error sweeps, and the flop-count models.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "cfjlas/analysis.hpp"
#include "cfjlas/report_io.hpp"
#include "cfjlas/scenario.hpp"
#include "cfjlas/sweep.hpp"

namespace {

using cfjlas::sim::InitMode;
using cfjlas::sim::ReportFormat;
using cfjlas::sim::ScenarioSpec;
using cfjlas::sim::SweepConfig;
using cfjlas::sim::SweepReport;

ScenarioSpec resolve_scenario(const std::string& source) {
  if (source == "default") return cfjlas::sim::default_scenario();
  return cfjlas::sim::load_scenario(source);
}

void apply_estimator_choice(SweepConfig& cfg, const std::string& estimator) {
  cfg.run_cfjlas = estimator == "cfjlas" || estimator == "both";
  cfg.run_iterative = estimator == "iterative" || estimator == "both";
}

ReportFormat parse_format(const std::string& format) {
  return format == "json" ? ReportFormat::Json : ReportFormat::Csv;
}

void write_output(const SweepReport& report, const std::string& format,
                  const std::string& out) {
  if (out.empty()) {
    std::cout << (format == "json" ? cfjlas::sim::report_to_json(report)
                                   : cfjlas::sim::report_to_csv(report));
    if (format == "json") std::cout << "\n";
  } else {
    cfjlas::sim::emit_report(report, parse_format(format), out);
    std::cerr << "wrote " << out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint localization and synchronization simulator"};
  app.require_subcommand(1);

  // --- simulate: noise sweep -------------------------------------------
  std::string sim_scenario = "default";
  double noise_start = 0.1, noise_stop = 3.0;
  int noise_steps = 11;
  int runs = 2000;
  std::uint64_t seed = 42;
  std::string estimator = "both";
  std::string init_mode = "ground_truth";
  double init_error_std = 200.0;
  std::string format = "csv";
  std::string out;
  int threads = 1;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo sweep over measurement noise levels");
  simulate->add_option("--scenario", sim_scenario,
                       "scenario file path or 'default'");
  simulate->add_option("--noise-start", noise_start, "first sigma, m");
  simulate->add_option("--noise-stop", noise_stop, "last sigma, m");
  simulate->add_option("--noise-steps", noise_steps, "number of sigma steps");
  simulate->add_option("--runs", runs, "Monte-Carlo runs per step");
  simulate->add_option("--seed", seed, "master seed");
  simulate
      ->add_option("--estimator", estimator, "cfjlas, iterative, or both")
      ->check(CLI::IsMember({"cfjlas", "iterative", "both"}));
  simulate
      ->add_option("--init-mode", init_mode,
                   "baseline initialization: ground_truth or perturbed")
      ->check(CLI::IsMember({"ground_truth", "perturbed"}));
  simulate->add_option("--init-error-std", init_error_std,
                       "per-coordinate STD of the perturbed initial position, m");
  simulate->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--out", out, "output file (stdout when omitted)");
  simulate->add_option("--threads", threads, "worker threads");

  // --- sweep-init-error: fixed noise, growing initial error ------------
  double init_start = 10.0, init_stop = 200.0;
  int init_steps = 20;
  double sigma = 2.0;

  CLI::App* init_sweep = app.add_subcommand(
      "sweep-init-error",
      "sweep the baseline's initial position error at fixed noise");
  init_sweep->add_option("--scenario", sim_scenario,
                         "scenario file path or 'default'");
  init_sweep->add_option("--init-start", init_start, "first init error STD, m");
  init_sweep->add_option("--init-stop", init_stop, "last init error STD, m");
  init_sweep->add_option("--init-steps", init_steps, "number of steps");
  init_sweep->add_option("--sigma", sigma, "measurement noise sigma, m");
  init_sweep->add_option("--runs", runs, "Monte-Carlo runs per step");
  init_sweep->add_option("--seed", seed, "master seed");
  init_sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  init_sweep->add_option("--out", out, "output file (stdout when omitted)");
  init_sweep->add_option("--threads", threads, "worker threads");

  // --- flops: complexity models ----------------------------------------
  int flops_K = 2, flops_M = 8, flops_iters = 1;
  CLI::App* flops = app.add_subcommand(
      "flops", "print the closed-form and per-iteration flop models");
  flops->add_option("--K", flops_K, "position dimension (2 or 3)");
  flops->add_option("--M", flops_M, "number of anchors");
  flops->add_option("--iters", flops_iters, "baseline iteration count");

  // --- scenario-dump: write the built-in scenario -----------------------
  std::string dump_out = "scenario.json";
  CLI::App* dump = app.add_subcommand(
      "scenario-dump", "write the built-in scenario to a JSON file");
  dump->add_option("--out", dump_out, "destination path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      SweepConfig cfg;
      cfg.scenario = resolve_scenario(sim_scenario);
      cfg.noise_start = noise_start;
      cfg.noise_stop = noise_stop;
      cfg.noise_steps = noise_steps;
      cfg.runs_per_step = runs;
      cfg.master_seed = seed;
      cfg.init_mode =
          init_mode == "perturbed" ? InitMode::Perturbed : InitMode::GroundTruth;
      cfg.init_error_std = init_error_std;
      cfg.threads = threads;
      apply_estimator_choice(cfg, estimator);
      write_output(cfjlas::sim::run_sweep(cfg), format, out);
    } else if (*init_sweep) {
      SweepConfig cfg;
      cfg.scenario = resolve_scenario(sim_scenario);
      cfg.runs_per_step = runs;
      cfg.master_seed = seed;
      cfg.threads = threads;
      write_output(cfjlas::sim::run_init_error_sweep(cfg, init_start, init_stop,
                                                     init_steps, sigma),
                   format, out);
    } else if (*flops) {
      const long long d = cfjlas::flops_cfjlas(flops_K, flops_M);
      const long long l =
          cfjlas::flops_iterative_per_iteration(flops_K, flops_M);
      std::cout << "D  (closed form)        = " << d << "\n"
                << "L  (per iteration)      = " << l << "\n"
                << "nL (n=" << flops_iters << ")              = "
                << cfjlas::flops_iterative(flops_K, flops_M, flops_iters)
                << "\n";
    } else if (*dump) {
      cfjlas::sim::save_scenario(cfjlas::sim::default_scenario(), dump_out);
      std::cerr << "wrote " << dump_out << "\n";
    }
  } catch (const cfjlas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
