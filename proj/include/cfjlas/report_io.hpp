#pragma once

#include <string>

#include "cfjlas/sweep.hpp"

namespace cfjlas::sim {

enum class ReportFormat { Csv, Json };

// CSV rendering of a report: one row per (step, estimator), columns
//   noise_sigma_m, estimator, runs, mse_p, mse_v, mse_beta, mse_omega,
//   crlb_p, crlb_v, crlb_beta, crlb_omega, correctness_rate,
//   n_converged, n_singular, n_exceeded, wallclock_s, flops_model
// with floating-point values printed to 12 significant digits. Reports on
// the init-error axis append a trailing init_error_std_m column.
std::string report_to_csv(const SweepReport& report);

// JSON rendering mirrors the same fields per step; doubles keep full
// round-trip precision there.
std::string report_to_json(const SweepReport& report);

void emit_report(const SweepReport& report, ReportFormat format,
                 const std::string& path);

SweepReport load_report_json(const std::string& path);

}  // namespace cfjlas::sim
