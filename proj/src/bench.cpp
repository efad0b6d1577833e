#include "hadfem/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hadfem {

namespace {

void verify_manufactured(const BenchmarkProblem& bp) {
  if (!bp.exact) return;
  const Problem& pb = bp.problem;
  const ExactSolution& ex = *bp.exact;
  for (int i = 0; i < 50; ++i) {
    const double x = pb.domain.a + (static_cast<double>(i) + 0.5) / 50.0 *
                                       pb.domain.length();
    const double u = ex.u(x), du = ex.du(x), d2u = ex.d2u(x);
    const double lhs =
        pb.p.apply(u, du, d2u, x) * pb.q.apply(u, du, d2u, x) +
        pb.l.apply(u, du, d2u, x);
    const double fx = pb.f(x);
    if (std::abs(lhs - fx) > 1e-10 * std::max(1.0, std::abs(fx)))
      throw std::logic_error("benchmark \"" + bp.name +
                             "\": exact solution does not satisfy the "
                             "equation at x = " + std::to_string(x));
  }
  auto check_bc = [&](const BoundaryCondition& c, double x, double normal) {
    const double want = c.kind == BcKind::dirichlet ? ex.u(x)
                                                    : normal * ex.du(x);
    if (std::abs(want - c.value) > 1e-10)
      throw std::logic_error("benchmark \"" + bp.name +
                             "\": boundary data does not match the exact "
                             "solution");
  };
  check_bc(pb.bc.left, pb.domain.a, -1.0);
  check_bc(pb.bc.right, pb.domain.b, +1.0);
}

std::vector<BenchmarkProblem> make_builtins() {
  using std::numbers::pi;
  std::vector<BenchmarkProblem> out;

  {
    BenchmarkProblem bp;
    bp.name = "burgers";
    bp.description = "u u' - 0.1 u'' = f on (0,1), u = sin(pi x)";
    bp.problem.p = LinearOperator::identity();
    bp.problem.q = LinearOperator::first_derivative();
    bp.problem.l = LinearOperator::second_derivative(-0.1);
    bp.problem.f = [](double x) {
      return pi * std::sin(pi * x) * std::cos(pi * x) +
             0.1 * pi * pi * std::sin(pi * x);
    };
    bp.problem.domain = {0.0, 1.0};
    bp.problem.bc = {BoundaryCondition::dirichlet(0.0),
                     BoundaryCondition::dirichlet(0.0)};
    bp.exact = ExactSolution{
        [](double x) { return std::sin(pi * x); },
        [](double x) { return pi * std::cos(pi * x); },
        [](double x) { return -pi * pi * std::sin(pi * x); }};
    out.push_back(std::move(bp));
  }

  {
    BenchmarkProblem bp;
    bp.name = "reaction";
    bp.description = "u^2 + u - u'' = f on (0,1), u = x(1-x)";
    bp.problem.p = LinearOperator::identity();
    bp.problem.q = LinearOperator::identity();
    bp.problem.l = LinearOperator(
        {OperatorTerm::constant(1.0, 0), OperatorTerm::constant(-1.0, 2)});
    bp.problem.f = [](double x) {
      const double u = x * (1.0 - x);
      return u * u + u + 2.0;
    };
    bp.problem.f_degree = 4;
    bp.problem.domain = {0.0, 1.0};
    bp.problem.bc = {BoundaryCondition::dirichlet(0.0),
                     BoundaryCondition::dirichlet(0.0)};
    bp.exact = ExactSolution{[](double x) { return x * (1.0 - x); },
                             [](double x) { return 1.0 - 2.0 * x; },
                             [](double) { return -2.0; }};
    out.push_back(std::move(bp));
  }

  {
    BenchmarkProblem bp;
    bp.name = "poisson";
    bp.description = "-u'' = 2 on (0,1), u = x(1-x); no product term";
    bp.problem.p = LinearOperator::zero();
    bp.problem.q = LinearOperator::zero();
    bp.problem.l = LinearOperator::second_derivative(-1.0);
    bp.problem.f = [](double) { return 2.0; };
    bp.problem.f_degree = 0;
    bp.problem.domain = {0.0, 1.0};
    bp.problem.bc = {BoundaryCondition::dirichlet(0.0),
                     BoundaryCondition::dirichlet(0.0)};
    bp.exact = ExactSolution{[](double x) { return x * (1.0 - x); },
                             [](double x) { return 1.0 - 2.0 * x; },
                             [](double) { return -2.0; }};
    out.push_back(std::move(bp));
  }

  {
    BenchmarkProblem bp;
    bp.name = "burgers_forced";
    bp.description = "u u' - 0.1 u'' = 1 on (0,1); no closed-form solution";
    bp.problem.p = LinearOperator::identity();
    bp.problem.q = LinearOperator::first_derivative();
    bp.problem.l = LinearOperator::second_derivative(-0.1);
    bp.problem.f = [](double) { return 1.0; };
    bp.problem.f_degree = 0;
    bp.problem.domain = {0.0, 1.0};
    bp.problem.bc = {BoundaryCondition::dirichlet(0.0),
                     BoundaryCondition::dirichlet(0.0)};
    out.push_back(std::move(bp));
  }

  for (auto& bp : out) {
    bp.problem.validate();
    verify_manufactured(bp);
  }
  return out;
}

}  // namespace

const std::vector<BenchmarkProblem>& builtin_problems() {
  static const std::vector<BenchmarkProblem> problems = make_builtins();
  return problems;
}

const BenchmarkProblem& find_problem(const std::string& name) {
  std::string known;
  for (const auto& bp : builtin_problems()) {
    if (bp.name == name) return bp;
    if (!known.empty()) known += ", ";
    known += bp.name;
  }
  throw std::invalid_argument("unknown problem \"" + name +
                              "\" (known: " + known + ")");
}

BasisSet make_run_basis(const RunConfig& cfg, const Problem& problem) {
  if (cfg.basis == BasisKind::fe_hat)
    return BasisSet::fe_hat(problem.domain, cfg.n);
  if (cfg.boundary_mode == BoundaryMode::eliminate)
    return BasisSet::modal_adapted(
        problem.domain, cfg.n,
        problem.bc.left.kind == BcKind::dirichlet,
        problem.bc.right.kind == BcKind::dirichlet);
  return BasisSet::modal(problem.domain, cfg.n);
}

ErrorNorms solution_errors(const BasisSet& basis, const DofMap& dof,
                           const Vector& x, const ExactSolution& exact) {
  const Vector full = full_coefficients(dof, x);
  const bool fe = basis.kind() == BasisKind::fe_hat;
  const QuadratureRule rule = QuadratureRule::gauss_legendre(
      fe ? 6 : std::min<std::size_t>(basis.size() + 6, 64));

  std::vector<std::pair<double, double>> panels;
  if (fe) {
    const auto& nd = basis.nodes();
    for (std::size_t e = 0; e + 1 < nd.size(); ++e)
      panels.emplace_back(nd[e], nd[e + 1]);
  } else {
    const Domain1D& dom = basis.domain();
    constexpr std::size_t np = 8;
    for (std::size_t k = 0; k < np; ++k)
      panels.emplace_back(dom.a + dom.length() * static_cast<double>(k) / np,
                          k + 1 == np
                              ? dom.b
                              : dom.a + dom.length() *
                                            static_cast<double>(k + 1) / np);
  }

  ErrorNorms norms;
  double acc = 0.0;
  auto sample = [&](double xx) {
    const double e = basis.eval_expansion(full, xx, 0) - exact.u(xx);
    norms.max = std::max(norms.max, std::abs(e));
    return e;
  };
  for (const auto& [x0, x1] : panels) {
    const MappedQuadrature mq = map_to_interval(rule, x0, x1);
    for (std::size_t i = 0; i < mq.points.size(); ++i) {
      const double e = sample(mq.points[i]);
      acc += mq.weights[i] * e * e;
    }
    sample(x0);
    sample(x1);
  }
  norms.l2 = std::sqrt(acc);
  return norms;
}

namespace {

void check_size_limits(const RunConfig& cfg, std::size_t dim) {
  if (dim > 512)
    throw std::invalid_argument(
        "run: dense storage is limited to 512 unknowns, got " +
        std::to_string(dim));
  if (cfg.formulation == Formulation::classical && dim > 64)
    throw std::invalid_argument(
        "run: the tensor form stores an n x n^2 array; classical runs are "
        "limited to 64 unknowns, got " + std::to_string(dim));
}

}  // namespace

RunRecord run_single(const RunConfig& cfg) {
  const BenchmarkProblem& bp = find_problem(cfg.problem);
  const Problem& pb = bp.problem;
  const AssemblyOptions opts{cfg.boundary_mode};
  const BasisSet basis = make_run_basis(cfg, pb);
  const QuadratureRule rule = default_rule(basis);
  const DofMap dof = make_dof_map(basis, pb.bc, opts.mode);
  check_size_limits(cfg, dof.dim());

  RunRecord rec;
  rec.problem = cfg.problem;
  rec.basis = cfg.basis;
  rec.n = cfg.n;
  rec.formulation = cfg.formulation;
  rec.solver = cfg.solver.method;
  rec.boundary_mode = cfg.boundary_mode;

  AssemblyInfo info;
  QuadCounter assembly_counter, iteration_counter;
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.formulation == Formulation::hadamard) {
    const HadamardSystem sys =
        assemble_hadamard(pb, basis, rule, opts, assembly_counter, &info);
    const Vector x0 = default_initial_guess(sys.D, sys.b);
    rec.report = solve(sys, x0, cfg.solver);
  } else {
    const KroneckerSystem sys =
        assemble_kronecker(pb, basis, rule, opts, assembly_counter, &info);
    const Vector x0 = default_initial_guess(sys.D, sys.b);
    rec.report = solve_reintegrating(pb, basis, rule, opts, sys, x0,
                                     cfg.solver, iteration_counter);
  }
  const auto t1 = std::chrono::steady_clock::now();

  rec.report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  rec.report.quad_evals_assembly = assembly_counter.value();
  rec.report.quad_evals_iteration = iteration_counter.value();
  rec.warnings = std::move(info.warnings);
  if (bp.exact && rec.report.solution.size() == dof.dim() &&
      rec.report.solution.all_finite()) {
    const ErrorNorms norms =
        solution_errors(basis, dof, rec.report.solution, *bp.exact);
    rec.error_l2 = norms.l2;
    rec.error_max = norms.max;
  }
  return rec;
}

namespace {

double resolution(const RunRecord& rec, const Domain1D& dom) {
  if (rec.basis == BasisKind::fe_hat)
    return dom.length() / static_cast<double>(rec.n - 1);
  return dom.length() / static_cast<double>(rec.n);
}

}  // namespace

std::vector<RunRecord> run_study(const RunConfig& base,
                                 const std::vector<std::size_t>& ns) {
  if (ns.empty())
    throw std::invalid_argument("refinement study: empty size list");
  if (!std::is_sorted(ns.begin(), ns.end()))
    throw std::invalid_argument("refinement study: sizes must be ascending");
  const Domain1D dom = find_problem(base.problem).problem.domain;
  std::vector<RunRecord> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) {
    RunConfig cfg = base;
    cfg.n = n;
    out.push_back(run_single(cfg));
    if (out.size() >= 2) {
      const RunRecord& prev = out[out.size() - 2];
      RunRecord& cur = out.back();
      if (prev.error_l2 && cur.error_l2 && *prev.error_l2 > 0.0 &&
          *cur.error_l2 > 0.0) {
        const double h0 = resolution(prev, dom);
        const double h1 = resolution(cur, dom);
        cur.observed_order_l2 =
            std::log(*prev.error_l2 / *cur.error_l2) / std::log(h0 / h1);
      }
    }
  }
  return out;
}

std::vector<RunRecord> run_compare(const RunConfig& base) {
  std::vector<RunRecord> out;
  RunConfig cfg = base;
  cfg.formulation = Formulation::classical;
  out.push_back(run_single(cfg));
  cfg.formulation = Formulation::hadamard;
  out.push_back(run_single(cfg));
  return out;
}

JacobianCheckResult jacobian_check(const RunConfig& cfg,
                                   std::size_t n_points) {
  const BenchmarkProblem& bp = find_problem(cfg.problem);
  const Problem& pb = bp.problem;
  const AssemblyOptions opts{cfg.boundary_mode};
  const BasisSet basis = make_run_basis(cfg, pb);
  const QuadratureRule rule = default_rule(basis);
  const DofMap dof = make_dof_map(basis, pb.bc, opts.mode);
  // Builds the tensor form regardless of cfg.formulation, so the stricter
  // classical limit applies.
  RunConfig limits = cfg;
  limits.formulation = Formulation::classical;
  check_size_limits(limits, dof.dim());

  QuadCounter counter;
  const HadamardSystem hsys =
      assemble_hadamard(pb, basis, rule, opts, counter);
  const KroneckerSystem ksys =
      assemble_kronecker(pb, basis, rule, opts, counter);
  const Vector x0 = default_initial_guess(hsys.D, hsys.b);

  JacobianCheckResult result;
  result.tolerance = 1e-8;
  const double step = 1e-6;
  auto rel_gap = [](const Matrix& a, const Matrix& fd) {
    double scale = 1.0, gap = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
      scale = std::max(scale, std::abs(a.data()[i]));
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
      gap = std::max(gap, std::abs(a.data()[i] - fd.data()[i]));
    return gap / scale;
  };

  for (std::size_t k = 0; k < n_points; ++k) {
    Vector x = x0;
    // Deterministic spread of evaluation points around the initial guess.
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += 0.25 * std::sin(1.7 * static_cast<double>(i + 1) +
                              0.9 * static_cast<double>(k));
    const Matrix jh = jacobian(hsys, x);
    const Matrix jhfd = fd_jacobian(
        [&](const Vector& v) { return residual(hsys, v); }, x, step);
    result.max_rel_hadamard =
        std::max(result.max_rel_hadamard, rel_gap(jh, jhfd));

    const Matrix jk = jacobian(ksys, x);
    const Matrix jkfd = fd_jacobian(
        [&](const Vector& v) { return residual(ksys, v); }, x, step);
    result.max_rel_kron = std::max(result.max_rel_kron, rel_gap(jk, jkfd));
  }
  result.pass = result.max_rel_hadamard <= result.tolerance &&
                result.max_rel_kron <= result.tolerance;
  return result;
}

}  // namespace hadfem
