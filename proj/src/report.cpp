#include "hadfem/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace hadfem {

ReportMeta ReportMeta::now(std::string command) {
  ReportMeta meta;
  meta.command = std::move(command);
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  meta.timestamp = buf;
  return meta;
}

const char* to_string(BasisKind k) {
  return k == BasisKind::fe_hat ? "fe_hat" : "modal_poly";
}

const char* to_string(Formulation f) {
  return f == Formulation::classical ? "classical" : "hadamard";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::newton_sjt:
      return "newton-sjt";
    case Method::newton_fd:
      return "newton-fd";
    case Method::picard:
      return "picard";
  }
  return "unknown";
}

const char* to_string(BoundaryMode m) {
  return m == BoundaryMode::eliminate ? "eliminate" : "weak";
}

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

nlohmann::json to_json(const RunRecord& rec) {
  nlohmann::json j;
  j["problem"] = rec.problem;
  j["basis"] = to_string(rec.basis);
  j["n"] = rec.n;
  j["formulation"] = to_string(rec.formulation);
  j["solver"] = to_string(rec.solver);
  j["boundary_mode"] = to_string(rec.boundary_mode);
  j["converged"] = rec.report.converged;
  j["iterates"] = rec.report.iterates;
  j["residual_history"] = rec.report.residual_history;
  j["final_residual"] = rec.report.final_residual();
  j["failure"] = rec.report.failure;
  j["solution"] = rec.report.solution.values();
  j["quad_evals_assembly"] = rec.report.quad_evals_assembly;
  j["quad_evals_iteration"] = rec.report.quad_evals_iteration;
  j["wall_time_s"] = rec.report.wall_time_s;
  j["error_l2"] = opt_json(rec.error_l2);
  j["error_max"] = opt_json(rec.error_max);
  j["observed_order_l2"] = opt_json(rec.observed_order_l2);
  j["warnings"] = rec.warnings;
  return j;
}

nlohmann::json report_json(const ReportMeta& meta,
                           const std::vector<RunRecord>& records) {
  nlohmann::json j;
  j["meta"] = {{"version", meta.version},
               {"command", meta.command},
               {"timestamp", meta.timestamp}};
  j["records"] = nlohmann::json::array();
  for (const auto& rec : records) j["records"].push_back(to_json(rec));
  return j;
}

std::string report_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "problem,basis,n,formulation,solver,converged,iterates,final_residual,"
      "error_l2,error_max,quad_evals_assembly,quad_evals_iteration,"
      "wall_time_s\n";
  for (const auto& rec : records) {
    out += rec.problem;
    out += ',';
    out += to_string(rec.basis);
    out += ',';
    out += std::to_string(rec.n);
    out += ',';
    out += to_string(rec.formulation);
    out += ',';
    out += to_string(rec.solver);
    out += ',';
    out += rec.report.converged ? "true" : "false";
    out += ',';
    out += std::to_string(rec.report.iterates);
    out += ',';
    out += format_sig(rec.report.final_residual());
    out += ',';
    if (rec.error_l2) out += format_sig(*rec.error_l2);
    out += ',';
    if (rec.error_max) out += format_sig(*rec.error_max);
    out += ',';
    out += std::to_string(rec.report.quad_evals_assembly);
    out += ',';
    out += std::to_string(rec.report.quad_evals_iteration);
    out += ',';
    out += format_sig(rec.report.wall_time_s);
    out += '\n';
  }
  return out;
}

}  // namespace hadfem
