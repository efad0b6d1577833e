#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hadfem/bench.hpp"

using namespace hadfem;

TEST_CASE("builtin problems load with verified manufactured solutions") {
  const auto& problems = builtin_problems();
  CHECK(problems.size() >= 3);

  bool have_burgers = false, have_reaction = false, have_poisson = false;
  for (const auto& bp : problems) {
    CHECK_NOTHROW(bp.problem.validate());
    if (bp.name == "burgers") have_burgers = true;
    if (bp.name == "reaction") have_reaction = true;
    if (bp.name == "poisson") have_poisson = true;
  }
  CHECK(have_burgers);
  CHECK(have_reaction);
  CHECK(have_poisson);
}

TEST_CASE("burgers: manufactured sine solution with viscosity 0.1") {
  const BenchmarkProblem& bp = find_problem("burgers");
  REQUIRE(bp.exact.has_value());
  const double pi = 3.14159265358979323846;
  for (double x : {0.1, 0.35, 0.8}) {
    CHECK(bp.exact->u(x) == doctest::Approx(std::sin(pi * x)).epsilon(1e-12));
    // f = u u' + 0.1 pi^2 sin(pi x) by construction.
    const double want = std::sin(pi * x) * pi * std::cos(pi * x) +
                        0.1 * pi * pi * std::sin(pi * x);
    CHECK(bp.problem.f(x) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(bp.exact->u(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bp.exact->u(1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reaction: forcing at x = 0.5 is 2.3125") {
  const BenchmarkProblem& bp = find_problem("reaction");
  CHECK(bp.problem.f(0.5) == doctest::Approx(2.3125).epsilon(1e-14));
  REQUIRE(bp.exact.has_value());
  CHECK(bp.exact->u(0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("poisson: the degenerate linear control problem") {
  const BenchmarkProblem& bp = find_problem("poisson");
  CHECK(bp.problem.p.is_zero());
  CHECK_FALSE(bp.problem.has_product());
  CHECK(bp.problem.f(0.123) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("unknown problem names raise an error listing the catalog") {
  try {
    find_problem("nosuch");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("nosuch") != std::string::npos);
    CHECK(msg.find("burgers") != std::string::npos);
  }
}

TEST_CASE("run_single on poisson: one iterate, small errors, zero iteration ticks") {
  RunConfig cfg;
  cfg.problem = "poisson";
  cfg.n = 17;
  RunRecord rec = run_single(cfg);

  CHECK(rec.report.converged);
  CHECK(rec.report.iterates == 1);
  REQUIRE(rec.error_l2.has_value());
  REQUIRE(rec.error_max.has_value());
  CHECK(*rec.error_l2 < 1e-2);
  CHECK(*rec.error_l2 > 0.0);
  CHECK(*rec.error_max < 1e-2);
  CHECK_FALSE(rec.observed_order_l2.has_value());
  CHECK(rec.report.quad_evals_assembly > 0);
  CHECK(rec.report.quad_evals_iteration == 0);
  CHECK(rec.report.wall_time_s >= 0.0);
}

TEST_CASE("run_study observes second-order convergence on poisson hats") {
  RunConfig cfg;
  cfg.problem = "poisson";
  auto records = run_study(cfg, {8, 16, 32, 64});
  REQUIRE(records.size() == 4);
  CHECK_FALSE(records[0].observed_order_l2.has_value());
  for (std::size_t k = 1; k < records.size(); ++k) {
    REQUIRE(records[k].observed_order_l2.has_value());
    CHECK(*records[k].observed_order_l2 > 1.8);
    CHECK(*records[k].observed_order_l2 < 2.2);
  }

  auto bad = [&] { return run_study(cfg, {16, 8}); };
  CHECK_THROWS_AS(bad(), std::invalid_argument);
  auto empty = [&] { return run_study(cfg, {}); };
  CHECK_THROWS_AS(empty(), std::invalid_argument);
}

TEST_CASE("run_compare: classical re-integrates, factored form does not") {
  RunConfig cfg;
  cfg.problem = "burgers";
  cfg.n = 32;
  auto records = run_compare(cfg);
  REQUIRE(records.size() == 2);

  const RunRecord& classical = records[0];
  const RunRecord& had = records[1];
  CHECK(classical.formulation == Formulation::classical);
  CHECK(had.formulation == Formulation::hadamard);
  REQUIRE(classical.report.converged);
  REQUIRE(had.report.converged);

  CHECK(had.report.quad_evals_iteration == 0);
  // Each classical iteration re-integrates the full residual once, plus one
  // final evaluation when convergence is detected.
  CHECK(classical.report.quad_evals_iteration ==
        (classical.report.iterates + 1) * classical.report.quad_evals_assembly);

  // The two discretizations genuinely differ.
  REQUIRE(classical.error_l2.has_value());
  REQUIRE(had.error_l2.has_value());
  CHECK(std::abs(*classical.error_l2 - *had.error_l2) > 1e-6);
}

TEST_CASE("jacobian_check passes on the builtins") {
  for (const char* name : {"burgers", "reaction", "poisson"}) {
    CAPTURE(name);
    RunConfig cfg;
    cfg.problem = name;
    cfg.n = 12;
    JacobianCheckResult res = jacobian_check(cfg);
    CHECK(res.pass);
    CHECK(res.max_rel_hadamard <= res.tolerance);
    CHECK(res.max_rel_kron <= res.tolerance);
  }
}

TEST_CASE("size limits: tensor runs are capped harder than factored runs") {
  RunConfig cfg;
  cfg.problem = "burgers";
  cfg.formulation = Formulation::classical;
  cfg.n = 100;  // 98 unknowns after elimination: beyond the tensor cap
  CHECK_THROWS_AS(run_single(cfg), std::invalid_argument);

  cfg.formulation = Formulation::hadamard;
  CHECK_NOTHROW(run_single(cfg));

  cfg.n = 600;  // beyond the dense cap entirely
  CHECK_THROWS_AS(run_single(cfg), std::invalid_argument);
}

TEST_CASE("modal runs adapt the basis to the essential ends") {
  const Problem& prob = find_problem("reaction").problem;
  RunConfig cfg;
  cfg.problem = "reaction";
  cfg.basis = BasisKind::modal_poly;
  cfg.n = 6;
  BasisSet basis = make_run_basis(cfg, prob);
  CHECK(basis.kind() == BasisKind::modal_poly);
  CHECK(basis.size() == 6);
  CHECK(basis.zero_at_left());
  CHECK(basis.zero_at_right());

  cfg.boundary_mode = BoundaryMode::weak;
  BasisSet weak_basis = make_run_basis(cfg, prob);
  CHECK_FALSE(weak_basis.zero_at_left());

  RunRecord rec = run_single(cfg);
  CHECK(rec.report.converged);
}

TEST_CASE("picard run on the factored burgers system converges") {
  RunConfig cfg;
  cfg.problem = "burgers";
  cfg.n = 16;
  cfg.solver.method = Method::picard;
  cfg.solver.max_iter = 200;
  RunRecord rec = run_single(cfg);
  REQUIRE(rec.report.converged);
  CHECK(rec.report.iterates <= 200);

  RunConfig newton_cfg = cfg;
  newton_cfg.solver = SolverConfig{};
  RunRecord newton_rec = run_single(newton_cfg);
  REQUIRE(newton_rec.report.converged);
  CHECK(norm_inf(rec.report.solution - newton_rec.report.solution) <= 1e-6);
}

TEST_CASE("solution_errors reproduces hand-computed norms") {
  // Interpolate u = x on hats: zero error against the exact line.
  BasisSet basis = BasisSet::fe_hat(Domain1D{0.0, 1.0}, 9);
  BoundarySpec bc{BoundaryCondition::dirichlet(0.0),
                  BoundaryCondition::dirichlet(1.0)};
  DofMap dof = make_dof_map(basis, bc, BoundaryMode::eliminate);
  Vector x(dof.dim());
  for (std::size_t k = 0; k < dof.free.size(); ++k)
    x[k] = basis.nodes()[dof.free[k]];
  ExactSolution line{[](double x) { return x; }, [](double) { return 1.0; },
                     [](double) { return 0.0; }};
  ErrorNorms errs = solution_errors(basis, dof, x, line);
  CHECK(errs.l2 <= 1e-14);
  CHECK(errs.max <= 1e-14);

  // Interpolating x^2 leaves e(x) = (x - x0)(x - x1) on each element, so the
  // L2 error is exactly h^2 / sqrt(30) (the integrand is degree four, which
  // the sampling rule integrates exactly) and the true sup norm is h^2 / 4.
  ExactSolution parab{[](double x) { return x * x; },
                      [](double x) { return 2.0 * x; },
                      [](double) { return 2.0; }};
  for (std::size_t k = 0; k < dof.free.size(); ++k) {
    const double nd = basis.nodes()[dof.free[k]];
    x[k] = nd * nd;
  }
  // Fixed end values 0 and 1 happen to equal x^2 at the ends already.
  ErrorNorms perrs = solution_errors(basis, dof, x, parab);
  const double h = 1.0 / 8.0;
  CHECK(perrs.l2 == doctest::Approx(h * h / std::sqrt(30.0)).epsilon(1e-12));
  CHECK(perrs.max > 0.2 * h * h);
  CHECK(perrs.max <= 0.25 * h * h + 1e-15);
}
