#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "hadfem/bench.hpp"
#include "hadfem/kernels.hpp"
#include "hadfem/report.hpp"

namespace {

using namespace hadfem;

struct CliOptions {
  RunConfig run;
  std::vector<std::size_t> n_list = {8, 16, 32, 64};
  std::string output;
  std::string format = "json";
  std::string kernels = "auto";
};

bool color_enabled() {
  if (std::getenv("NO_COLOR") != nullptr) return false;
  return isatty(fileno(stdout)) != 0;
}

const char* paint(bool ok, bool color) {
  if (!color) return ok ? "converged" : "did not converge";
  return ok ? "\033[32mconverged\033[0m" : "\033[31mdid not converge\033[0m";
}

void print_summary(const std::vector<RunRecord>& recs, bool color) {
  for (const auto& rec : recs) {
    std::cout << rec.problem << " " << to_string(rec.basis) << " n=" << rec.n
              << " " << to_string(rec.formulation) << " "
              << to_string(rec.solver) << ": " << paint(rec.report.converged, color)
              << " after " << rec.report.iterates
              << " iterations, residual " << format_sig(rec.report.final_residual())
              << "\n";
    if (!rec.report.failure.empty())
      std::cout << "  stopped: " << rec.report.failure << "\n";
    if (rec.error_l2)
      std::cout << "  error l2 " << format_sig(*rec.error_l2) << ", max "
                << format_sig(*rec.error_max) << "\n";
    if (rec.observed_order_l2)
      std::cout << "  observed l2 order " << format_sig(*rec.observed_order_l2)
                << "\n";
    std::cout << "  quadrature evals: assembly " << rec.report.quad_evals_assembly
              << ", iteration " << rec.report.quad_evals_iteration << "\n";
    for (const auto& w : rec.warnings) std::cout << "  warning: " << w << "\n";
  }
}

int emit_report(const CliOptions& opt, const ReportMeta& meta,
                const std::vector<RunRecord>& recs) {
  const std::string payload =
      opt.format == "csv" ? report_csv(recs)
                          : report_json(meta, recs).dump(2) + "\n";
  if (opt.output.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(opt.output);
    if (!f) {
      std::cerr << "error: cannot open output file \"" << opt.output << "\"\n";
      return 2;
    }
    f << payload;
    print_summary(recs, color_enabled());
    std::cout << "report written to " << opt.output << "\n";
  }
  for (const auto& rec : recs)
    if (!rec.report.converged) return 1;
  return 0;
}

std::string join_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

void add_run_options(CLI::App* cmd, CliOptions& opt, bool with_formulation) {
  static const std::map<std::string, BasisKind> basis_map{
      {"fe_hat", BasisKind::fe_hat}, {"modal_poly", BasisKind::modal_poly}};
  static const std::map<std::string, Formulation> form_map{
      {"classical", Formulation::classical},
      {"hadamard", Formulation::hadamard}};
  static const std::map<std::string, Method> solver_map{
      {"newton-sjt", Method::newton_sjt},
      {"newton-fd", Method::newton_fd},
      {"picard", Method::picard}};
  static const std::map<std::string, BoundaryMode> mode_map{
      {"eliminate", BoundaryMode::eliminate}, {"weak", BoundaryMode::weak}};

  cmd->add_option("--problem", opt.run.problem, "Benchmark problem name")
      ->capture_default_str();
  cmd->add_option("--basis", opt.run.basis,
                  "Basis family (fe_hat | modal_poly)")
      ->transform(CLI::CheckedTransformer(basis_map))
      ->default_str("fe_hat");
  cmd->add_option("--n", opt.run.n,
                  "Discretization size (nodes for fe_hat, modes for "
                  "modal_poly)")
      ->capture_default_str();
  if (with_formulation)
    cmd->add_option("--formulation", opt.run.formulation,
                    "Form of the quadratic term (classical | hadamard)")
        ->transform(CLI::CheckedTransformer(form_map))
        ->default_str("hadamard");
  cmd->add_option("--solver", opt.run.solver.method,
                  "Iteration (newton-sjt | newton-fd | picard)")
      ->transform(CLI::CheckedTransformer(solver_map))
      ->default_str("newton-sjt");
  cmd->add_option("--tol", opt.run.solver.tol,
                  "Convergence tolerance on the residual max-norm")
      ->capture_default_str();
  cmd->add_option("--max-iter", opt.run.solver.max_iter,
                  "Iteration limit")
      ->capture_default_str();
  cmd->add_option("--damping", opt.run.solver.damping,
                  "Step fraction in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--boundary-mode", opt.run.boundary_mode,
                  "Essential condition handling (eliminate | weak)")
      ->transform(CLI::CheckedTransformer(mode_map))
      ->default_str("eliminate");
  cmd->add_option("--output", opt.output,
                  "Write the report here instead of stdout");
  cmd->add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D nonlinear Galerkin benchmarks: classical tensor form vs. "
               "factored Hadamard form"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CliOptions opt;
  app.add_option("--kernels", opt.kernels,
                 "Dense kernel backend (auto | scalar | avx2)")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();

  CLI::App* solve = app.add_subcommand("solve", "Assemble and solve once");
  add_run_options(solve, opt, true);

  CLI::App* conv = app.add_subcommand(
      "convergence", "Solve on a refinement sequence and report L2 orders");
  add_run_options(conv, opt, true);
  conv->add_option("--n-list", opt.n_list,
                   "Comma-separated discretization sizes")
      ->delimiter(',')
      ->capture_default_str();

  CLI::App* compare = app.add_subcommand(
      "compare", "Run the same setup under both formulations");
  add_run_options(compare, opt, false);

  CLI::App* jcheck = app.add_subcommand(
      "jacobian-check",
      "Compare analytic Jacobians of both forms against finite differences");
  add_run_options(jcheck, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (opt.kernels != "auto")
      kernels::force_backend(opt.kernels == "scalar"
                                 ? kernels::Backend::scalar
                                 : kernels::Backend::avx2);

    const bool classical_leg =
        app.got_subcommand(compare) ||
        opt.run.formulation == Formulation::classical;
    if (opt.run.solver.method == Method::picard && classical_leg) {
      std::cerr << "error: picard freezes one factor of the product and only "
                   "applies to the hadamard formulation\n";
      return 2;
    }

    const ReportMeta meta = ReportMeta::now(join_command(argc, argv));
    if (app.got_subcommand(solve))
      return emit_report(opt, meta, {run_single(opt.run)});
    if (app.got_subcommand(conv))
      return emit_report(opt, meta, run_study(opt.run, opt.n_list));
    if (app.got_subcommand(compare))
      return emit_report(opt, meta, run_compare(opt.run));

    const JacobianCheckResult res = jacobian_check(opt.run);
    std::cout << "analytic vs finite-difference Jacobians for \""
              << opt.run.problem << "\" (n=" << opt.run.n << ", "
              << to_string(opt.run.basis) << ")\n"
              << "  hadamard form: max relative gap "
              << format_sig(res.max_rel_hadamard) << "\n"
              << "  tensor form:   max relative gap "
              << format_sig(res.max_rel_kron) << "\n"
              << "  tolerance " << format_sig(res.tolerance) << ": "
              << (res.pass ? "PASS" : "FAIL") << "\n";
    return res.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
