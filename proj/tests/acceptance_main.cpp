// Acceptance gate: nine end-to-end checks covering the elementwise-product
// algebra, both discretization forms, the solvers, and the command-line
// front end. One [PASS]/[FAIL] line is printed per criterion; the exit code
// is the number of failed criteria. Tolerances and budgets are pinned here
// on purpose -- loosening them is a decision, not a refactor.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "hadfem/assembly.hpp"
#include "hadfem/bench.hpp"
#include "hadfem/solvers.hpp"

using namespace hadfem;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Runs one criterion; the body returns an empty string on success or a
// human-readable reason on failure. A nonzero budget adds a wall-time gate.
class Gate {
 public:
  void run(int index, const char* label,
           const std::function<std::string()>& body, double budget_s = 0.0) {
    const double t0 = now_s();
    std::string detail;
    try {
      detail = body();
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    const double elapsed = now_s() - t0;
    if (detail.empty() && budget_s > 0.0 && elapsed > budget_s) {
      std::ostringstream os;
      os << "time budget exceeded: " << elapsed << " s > " << budget_s << " s";
      detail = os.str();
    }
    if (detail.empty()) {
      std::printf("[PASS] %d. %s (%.2f s)\n", index, label, elapsed);
    } else {
      std::printf("[FAIL] %d. %s: %s\n", index, label, detail.c_str());
      ++failures_;
    }
    std::fflush(stdout);
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fail(const std::string& what) { return what; }

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

Vector random_vector(std::mt19937& rng, std::size_t n, double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      s = std::max(s, std::abs(m(i, j)));
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return max_abs(a - b);
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + HADFEM_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult res;
  if (pipe == nullptr) return res;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) res.output += buf;
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// --- criterion bodies ------------------------------------------------------

// Commutativity (exact), associativity, distributivity, kron bilinearity,
// row scaling against naive diag(v) * A, and an LU residual bound, on 100
// random instances up to n = 32.
std::string algebra_identities() {
  std::mt19937 rng(20240811);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 32);
    const Matrix a = random_matrix(rng, n, n);
    const Matrix b = random_matrix(rng, n, n);
    const Matrix c = random_matrix(rng, n, n);
    const Vector v = random_vector(rng, n);
    const Vector w = random_vector(rng, n);

    if (max_abs_diff(hadamard(a, b), hadamard(b, a)) != 0.0)
      return fail("elementwise product is not exactly commutative");
    if (max_abs_diff(hadamard(hadamard(a, b), c),
                     hadamard(a, hadamard(b, c))) > 1e-15)
      return fail("elementwise product associativity drifted");
    if (max_abs_diff(hadamard(a, b + c), hadamard(a, b) + hadamard(a, c)) >
        1e-14)
      return fail("elementwise product does not distribute over addition");

    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double alpha = u(rng);
    const Vector kl = kron(alpha * v, w);
    const Vector kr = alpha * kron(v, w);
    for (std::size_t i = 0; i < kl.size(); ++i)
      if (std::abs(kl[i] - kr[i]) > 1e-15 * (1.0 + std::abs(kr[i])))
        return fail("kron is not bilinear within rounding");

    Matrix diag_va(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) diag_va(i, j) = v[i] * a(i, j);
    if (max_abs_diff(scale_rows(v, a), diag_va) != 0.0)
      return fail("row scaling disagrees with naive diag(v) * A");

    Matrix wc = a;  // well conditioned: diagonally dominant shift
    for (std::size_t i = 0; i < n; ++i)
      wc(i, i) += static_cast<double>(n) + 1.0;
    const Vector rhs = matvec(wc, w);
    const Vector x = lu_solve(wc, rhs);
    if (norm_inf(matvec(wc, x) - rhs) > 1e-10 * std::max(1.0, norm_inf(rhs)))
      return fail("LU solve residual above bound");
  }
  return {};
}

// The stored n x n^2 tensor must reproduce the re-integrated weighted
// residual for every builtin problem.
std::string tensor_matches_direct() {
  std::mt19937 rng(7);
  for (const auto& bp : builtin_problems()) {
    const BasisSet basis = BasisSet::fe_hat(bp.problem.domain, 8);
    const QuadratureRule rule = default_rule(basis);
    const AssemblyOptions opts;
    const DofMap dof = make_dof_map(basis, bp.problem.bc, opts.mode);
    QuadCounter counter;
    const KroneckerSystem ksys =
        assemble_kronecker(bp.problem, basis, rule, opts, counter);

    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = random_vector(rng, dof.dim(), 2.0);
      const Vector r_kron = residual(ksys, x);
      const Vector r_direct =
          residual_direct(bp.problem, basis, rule, opts, x, counter);
      const double bound =
          1e-10 * (1.0 + norm_inf(x) * norm_inf(x));
      if (norm_inf(r_kron - r_direct) > bound) {
        std::ostringstream os;
        os << bp.name << ": gap " << norm_inf(r_kron - r_direct)
           << " above " << bound;
        return fail(os.str());
      }
    }
  }
  return {};
}

// Analytic Jacobians of both stored forms against central differences.
std::string jacobians_match_fd() {
  std::mt19937 rng(99);
  for (const auto& bp : builtin_problems()) {
    const BasisSet basis = BasisSet::fe_hat(bp.problem.domain, 16);
    const QuadratureRule rule = default_rule(basis);
    const AssemblyOptions opts;
    const DofMap dof = make_dof_map(basis, bp.problem.bc, opts.mode);
    QuadCounter counter;
    const HadamardSystem hsys =
        assemble_hadamard(bp.problem, basis, rule, opts, counter);
    const KroneckerSystem ksys =
        assemble_kronecker(bp.problem, basis, rule, opts, counter);

    for (int point = 0; point < 20; ++point) {
      const Vector x = random_vector(rng, dof.dim(), 1.0);
      const Matrix jh = jacobian(hsys, x);
      const Matrix jk = jacobian(ksys, x);
      const Matrix fh = fd_jacobian(
          [&](const Vector& y) { return residual(hsys, y); }, x, 1e-6);
      const Matrix fk = fd_jacobian(
          [&](const Vector& y) { return residual(ksys, y); }, x, 1e-6);
      const double sh = 1e-6 * (1.0 + max_abs(jh));
      const double sk = 1e-6 * (1.0 + max_abs(jk));
      if (max_abs_diff(jh, fh) > sh || max_abs_diff(jk, fk) > sk) {
        std::ostringstream os;
        os << bp.name << ": factored gap " << max_abs_diff(jh, fh)
           << ", tensor gap " << max_abs_diff(jk, fk);
        return fail(os.str());
      }
    }
  }
  return {};
}

// The factored form pays for quadrature once, at assembly; the classical
// baseline re-integrates every iteration. Counter values are asserted
// against closed forms for 32 hat functions: each of the 30 interior
// weights spans 2 elements sampled at 3 points, so one operator term costs
// 3 * (2 * 31 - 2) = 180 evaluations.
std::string one_time_integration() {
  RunConfig cfg;
  cfg.problem = "burgers";
  cfg.n = 32;
  const auto records = run_compare(cfg);
  if (records.size() != 2) return fail("expected two comparison records");
  const RunRecord& classical = records[0];
  const RunRecord& had = records[1];
  if (!classical.report.converged || !had.report.converged)
    return fail("a comparison leg did not converge");

  const std::uint64_t per_term = 3ull * (2ull * (cfg.n - 1) - 2ull);
  if (had.report.quad_evals_iteration != 0)
    return fail("factored form ticked quadrature during iteration");
  if (had.report.quad_evals_assembly != 4 * per_term) {
    std::ostringstream os;
    os << "factored assembly ticks " << had.report.quad_evals_assembly
       << ", expected " << 4 * per_term << " (two factors + linear + load)";
    return fail(os.str());
  }
  if (classical.report.quad_evals_assembly != 3 * per_term) {
    std::ostringstream os;
    os << "classical assembly ticks " << classical.report.quad_evals_assembly
       << ", expected " << 3 * per_term << " (linear + tensor + load)";
    return fail(os.str());
  }
  const std::uint64_t expected_iter =
      (classical.report.iterates + 1) * 3 * per_term;
  if (classical.report.quad_evals_iteration != expected_iter) {
    std::ostringstream os;
    os << "classical iteration ticks " << classical.report.quad_evals_iteration
       << ", expected " << expected_iter << " for "
       << classical.report.iterates << " iterates";
    return fail(os.str());
  }
  if (classical.report.quad_evals_iteration <
      classical.report.iterates * classical.report.quad_evals_assembly)
    return fail("classical iteration ticks below iterates x per-assembly");
  return {};
}

// On x .* x = [4, 9] from [1, 1] the error must contract quadratically for
// at least three consecutive steps and the residual must reach 1e-12 within
// eight iterations.
std::string newton_quadratic() {
  const HadamardSystem sys(Matrix::identity(2), Matrix::identity(2),
                           Matrix(2, 2), Vector{4.0, 9.0});
  std::vector<Vector> iterates;
  const ResidualFn rf = [&](const Vector& x) {
    iterates.push_back(x);
    return residual(sys, x);
  };
  const JacobianFn jf = [&](const Vector& x) { return jacobian(sys, x); };

  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 8;
  const SolveReport rep = newton_solve(rf, jf, Vector{1.0, 1.0}, cfg);
  if (!rep.converged) return fail("did not converge within 8 iterations");
  if (rep.final_residual() > 1e-12) {
    std::ostringstream os;
    os << "final residual " << rep.final_residual() << " above 1e-12";
    return fail(os.str());
  }

  const Vector root{2.0, 3.0};
  std::vector<double> errs;
  for (const Vector& x : iterates) errs.push_back(norm_inf(x - root));
  int best_run = 0, run = 0;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    if (errs[k + 1] <= 1.0 * errs[k] * errs[k]) {
      best_run = std::max(best_run, ++run);
    } else {
      run = 0;
    }
  }
  if (best_run < 3) {
    std::ostringstream os;
    os << "only " << best_run << " consecutive quadratic steps; errors:";
    for (double e : errs) os << " " << e;
    return fail(os.str());
  }
  return {};
}

// With the first product factor zeroed, the two discretizations are the
// same linear system and Newton finishes in one undamped step.
std::string linear_limit_agreement() {
  Problem prob = find_problem("burgers").problem;
  prob.p = LinearOperator::zero();
  prob.validate();

  const BasisSet basis = BasisSet::fe_hat(prob.domain, 16);
  const QuadratureRule rule = default_rule(basis);
  const AssemblyOptions opts;
  QuadCounter counter;
  const HadamardSystem hsys =
      assemble_hadamard(prob, basis, rule, opts, counter);
  const KroneckerSystem ksys =
      assemble_kronecker(prob, basis, rule, opts, counter);

  if (max_abs(hsys.A) != 0.0)
    return fail("zero factor produced a nonzero weighted matrix");
  if (max_abs(ksys.G) != 0.0)
    return fail("zero factor produced a nonzero product tensor");
  if (max_abs_diff(hsys.D, ksys.D) > 1e-12 ||
      norm_inf(hsys.b - ksys.b) > 1e-12)
    return fail("linear parts of the two forms differ");

  SolverConfig cfg;  // damping 1.0: undamped
  const Vector x0(hsys.dim());
  const SolveReport rh = newton_solve(hsys, x0, cfg);
  const SolveReport rk = newton_solve(ksys, x0, cfg);
  if (!rh.converged || !rk.converged) return fail("a linear solve failed");
  if (rh.iterates != 1 || rk.iterates != 1) {
    std::ostringstream os;
    os << "expected exactly 1 iteration, got " << rh.iterates << " and "
       << rk.iterates;
    return fail(os.str());
  }
  if (norm_inf(rh.solution - rk.solution) > 1e-12)
    return fail("solutions of the two forms differ beyond 1e-12");
  return {};
}

// Halving the mesh four times on the linear control problem must show
// second-order L2 convergence.
std::string second_order_study() {
  RunConfig cfg;
  cfg.problem = "poisson";
  const auto records = run_study(cfg, {8, 16, 32, 64});
  if (records.size() != 4) return fail("expected four study records");
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (!records[k].report.converged) return fail("a study run diverged");
    if (!records[k].observed_order_l2)
      return fail("missing observed order on a refinement record");
    const double order = *records[k].observed_order_l2;
    if (order < 1.8 || order > 2.2) {
      std::ostringstream os;
      os << "observed L2 order " << order << " outside [1.8, 2.2] at n="
         << records[k].n;
      return fail(os.str());
    }
  }
  return {};
}

// Picard (frozen factor) and Newton must land on the same solution of the
// factored Burgers system at default damping within 200 iterations.
std::string picard_newton_agree() {
  RunConfig picard;
  picard.problem = "burgers";
  picard.n = 16;
  picard.solver.method = Method::picard;
  picard.solver.max_iter = 200;

  RunConfig newton = picard;
  newton.solver = SolverConfig{};
  newton.solver.max_iter = 200;

  const RunRecord rp = run_single(picard);
  const RunRecord rn = run_single(newton);
  if (!rp.report.converged)
    return fail("picard did not converge within 200 iterations");
  if (!rn.report.converged)
    return fail("newton did not converge within 200 iterations");
  const double gap = norm_inf(rp.report.solution - rn.report.solution);
  if (gap > 1e-6) {
    std::ostringstream os;
    os << "solutions differ by " << gap;
    return fail(os.str());
  }
  return {};
}

// The compare subcommand of the installed CLI must show that the two
// formulations produce genuinely different discrete solutions, each with
// reported error norms.
std::string formulations_differ() {
  const CliResult res = run_cli("compare --problem burgers --n 32");
  if (res.exit_code != 0) {
    std::ostringstream os;
    os << "compare exited " << res.exit_code << ": " << res.output;
    return fail(os.str());
  }
  const nlohmann::json doc = nlohmann::json::parse(res.output);
  if (doc["records"].size() != 2) return fail("expected two records");
  const auto xc = doc["records"][0]["solution"].get<std::vector<double>>();
  const auto xh = doc["records"][1]["solution"].get<std::vector<double>>();
  if (xc.size() != xh.size()) return fail("solution sizes differ");
  double gap = 0.0;
  for (std::size_t i = 0; i < xc.size(); ++i)
    gap = std::max(gap, std::abs(xc[i] - xh[i]));
  if (gap <= 1e-6) {
    std::ostringstream os;
    os << "solutions agree to " << gap << "; discretizations should differ";
    return fail(os.str());
  }
  for (int k = 0; k < 2; ++k) {
    if (!doc["records"][k]["error_l2"].is_number() ||
        !doc["records"][k]["error_max"].is_number())
      return fail("a comparison record is missing its error norms");
  }
  return {};
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "elementwise-product algebra identities, 100 random instances",
           algebra_identities, 1.0);
  gate.run(2, "stored tensor reproduces the re-integrated residual",
           tensor_matches_direct, 10.0);
  gate.run(3, "analytic Jacobians match central finite differences",
           jacobians_match_fd);
  gate.run(4, "factored form integrates once; counters match closed forms",
           one_time_integration);
  gate.run(5, "Newton contracts quadratically on x .* x = [4, 9]",
           newton_quadratic);
  gate.run(6, "zero product factor: both forms give the same linear system",
           linear_limit_agreement);
  gate.run(7, "hat-basis refinement study shows second-order L2 convergence",
           second_order_study, 30.0);
  gate.run(8, "Picard and Newton agree on the factored Burgers system",
           picard_newton_agree);
  gate.run(9, "compare subcommand: the two discretizations genuinely differ",
           formulations_differ);

  if (gate.failures() == 0) {
    std::printf("all 9 criteria passed\n");
  } else {
    std::printf("%d of 9 criteria failed\n", gate.failures());
  }
  return gate.failures();
}
