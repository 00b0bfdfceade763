#include "cfjlas/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cfjlas::sim {

using nlohmann::json;

namespace {

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void append_csv_row(std::ostream& out, const StepRecord& step,
                    const char* name, const EstimatorStats& stats,
                    bool init_axis) {
  out << fmt12(step.noise_sigma_m) << ',' << name << ',' << stats.runs << ','
      << fmt12(stats.mse.mse_p) << ',' << fmt12(stats.mse.mse_v) << ','
      << fmt12(stats.mse.mse_beta) << ',' << fmt12(stats.mse.mse_omega) << ','
      << fmt12(step.crlb.pos_bound) << ',' << fmt12(step.crlb.vel_bound) << ','
      << fmt12(step.crlb.beta_bound) << ',' << fmt12(step.crlb.omega_bound)
      << ',' << fmt12(stats.correctness_rate) << ',' << stats.n_converged
      << ',' << stats.n_singular << ',' << stats.n_exceeded << ','
      << fmt12(stats.wallclock_s) << ',' << fmt12(stats.flops_model);
  if (init_axis) out << ',' << fmt12(step.init_error_std_m);
  out << '\n';
}

json stats_to_json(const char* name, const EstimatorStats& stats) {
  json j;
  j["name"] = name;
  j["runs"] = stats.runs;
  j["mse_p"] = stats.mse.mse_p;
  j["mse_v"] = stats.mse.mse_v;
  j["mse_beta"] = stats.mse.mse_beta;
  j["mse_omega"] = stats.mse.mse_omega;
  j["mse_runs"] = stats.mse.run_count;
  j["correctness_rate"] = stats.correctness_rate;
  j["n_converged"] = stats.n_converged;
  j["n_singular"] = stats.n_singular;
  j["n_exceeded"] = stats.n_exceeded;
  j["n_failed"] = stats.n_failed;
  j["wallclock_s"] = stats.wallclock_s;
  j["flops_model"] = stats.flops_model;
  j["mean_iterations"] = stats.mean_iterations;
  return j;
}

EstimatorStats stats_from_json(const json& j) {
  EstimatorStats stats;
  stats.runs = j.at("runs").get<int>();
  stats.mse.mse_p = j.at("mse_p").get<double>();
  stats.mse.mse_v = j.at("mse_v").get<double>();
  stats.mse.mse_beta = j.at("mse_beta").get<double>();
  stats.mse.mse_omega = j.at("mse_omega").get<double>();
  stats.mse.run_count = j.at("mse_runs").get<int>();
  stats.correctness_rate = j.at("correctness_rate").get<double>();
  stats.n_converged = j.at("n_converged").get<int>();
  stats.n_singular = j.at("n_singular").get<int>();
  stats.n_exceeded = j.at("n_exceeded").get<int>();
  stats.n_failed = j.at("n_failed").get<int>();
  stats.wallclock_s = j.at("wallclock_s").get<double>();
  stats.flops_model = j.at("flops_model").get<double>();
  stats.mean_iterations = j.at("mean_iterations").get<double>();
  return stats;
}

}  // namespace

std::string report_to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "noise_sigma_m,estimator,runs,mse_p,mse_v,mse_beta,mse_omega,"
         "crlb_p,crlb_v,crlb_beta,crlb_omega,correctness_rate,"
         "n_converged,n_singular,n_exceeded,wallclock_s,flops_model";
  if (report.init_error_axis) out << ",init_error_std_m";
  out << '\n';
  for (const StepRecord& step : report.steps) {
    if (step.cfjlas) {
      append_csv_row(out, step, "cfjlas", *step.cfjlas,
                     report.init_error_axis);
    }
    if (step.iterative) {
      append_csv_row(out, step, "iterative", *step.iterative,
                     report.init_error_axis);
    }
  }
  return out.str();
}

std::string report_to_json(const SweepReport& report) {
  json root;
  root["init_error_axis"] = report.init_error_axis;
  json steps = json::array();
  for (const StepRecord& step : report.steps) {
    json s;
    s["noise_sigma_m"] = step.noise_sigma_m;
    s["init_error_std_m"] = step.init_error_std_m;
    s["crlb"] = {{"pos", step.crlb.pos_bound},
                 {"vel", step.crlb.vel_bound},
                 {"beta", step.crlb.beta_bound},
                 {"omega", step.crlb.omega_bound}};
    json estimators = json::array();
    if (step.cfjlas) estimators.push_back(stats_to_json("cfjlas", *step.cfjlas));
    if (step.iterative) {
      estimators.push_back(stats_to_json("iterative", *step.iterative));
    }
    s["estimators"] = std::move(estimators);
    steps.push_back(std::move(s));
  }
  root["steps"] = std::move(steps);
  return root.dump(2);
}

void emit_report(const SweepReport& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report file: " + path);
  out << (format == ReportFormat::Csv ? report_to_csv(report)
                                      : report_to_json(report));
  if (format == ReportFormat::Json) out << '\n';
  out.flush();
  if (!out) throw IoError("error while writing report file: " + path);
}

SweepReport load_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report file ") + path + ": " + e.what());
  }
  try {
    SweepReport report;
    report.init_error_axis = root.at("init_error_axis").get<bool>();
    for (const json& s : root.at("steps")) {
      StepRecord step;
      step.noise_sigma_m = s.at("noise_sigma_m").get<double>();
      step.init_error_std_m = s.at("init_error_std_m").get<double>();
      const json& c = s.at("crlb");
      step.crlb.pos_bound = c.at("pos").get<double>();
      step.crlb.vel_bound = c.at("vel").get<double>();
      step.crlb.beta_bound = c.at("beta").get<double>();
      step.crlb.omega_bound = c.at("omega").get<double>();
      for (const json& est : s.at("estimators")) {
        const std::string name = est.at("name").get<std::string>();
        if (name == "cfjlas") {
          step.cfjlas = stats_from_json(est);
        } else if (name == "iterative") {
          step.iterative = stats_from_json(est);
        } else {
          throw ParseError("report file: unknown estimator name " + name);
        }
      }
      report.steps.push_back(std::move(step));
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report file ") + path + ": " + e.what());
  }
}

}  // namespace cfjlas::sim
