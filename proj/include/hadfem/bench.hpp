#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hadfem/assembly.hpp"
#include "hadfem/solvers.hpp"

namespace hadfem {

struct ExactSolution {
  ScalarField u, du, d2u;
};

// A named problem with an optional manufactured solution. Problems carrying
// an exact solution are verified on first access: the strong form must hold
// at 50 sample points and the boundary data must match the solution.
struct BenchmarkProblem {
  std::string name;
  std::string description;
  Problem problem;
  std::optional<ExactSolution> exact;
};

const std::vector<BenchmarkProblem>& builtin_problems();
// Throws std::invalid_argument listing the known names.
const BenchmarkProblem& find_problem(const std::string& name);

// classical: tensor form, every residual evaluation re-integrates the
// nonlinear term. hadamard: factored form, residuals and Jacobians come
// from the stored matrices.
enum class Formulation { classical, hadamard };

struct RunConfig {
  std::string problem = "burgers";
  BasisKind basis = BasisKind::fe_hat;
  // fe_hat: node count; modal_poly: number of modes.
  std::size_t n = 16;
  Formulation formulation = Formulation::hadamard;
  SolverConfig solver;
  BoundaryMode boundary_mode = BoundaryMode::eliminate;
};

struct RunRecord {
  std::string problem;
  BasisKind basis = BasisKind::fe_hat;
  std::size_t n = 0;
  Formulation formulation = Formulation::hadamard;
  Method solver = Method::newton_sjt;
  BoundaryMode boundary_mode = BoundaryMode::eliminate;
  // Counters and wall time are filled in: assembly ticks, iteration ticks
  // (zero for the factored form), and the assemble+solve duration.
  SolveReport report;
  // Present only when the problem has an exact solution and a solution
  // vector was produced.
  std::optional<double> error_l2;
  std::optional<double> error_max;
  // Present on refinement-study records after the first.
  std::optional<double> observed_order_l2;
  std::vector<std::string> warnings;
};

RunRecord run_single(const RunConfig& cfg);

// One run per entry of ns, ascending (base.n is ignored), with observed L2
// orders computed from consecutive refinements. A non-converged run is
// recorded and the study continues.
std::vector<RunRecord> run_study(const RunConfig& base,
                                 const std::vector<std::size_t>& ns);

// The same setup under both formulations: classical first, then hadamard.
std::vector<RunRecord> run_compare(const RunConfig& base);

// Basis matched to a run: uniform hats on n nodes, or n modal functions
// adapted to the essential ends when elimination is requested.
BasisSet make_run_basis(const RunConfig& cfg, const Problem& problem);

struct ErrorNorms {
  double l2 = 0.0;
  double max = 0.0;
};

// L2 and max-norm errors of the discrete solution x (unknowns of the dof
// map) against an exact solution, sampled on a refined quadrature.
ErrorNorms solution_errors(const BasisSet& basis, const DofMap& dof,
                           const Vector& x, const ExactSolution& exact);

// Compares the analytic Jacobians of both stored forms against central
// finite differences of their residuals at a handful of deterministic
// points near the default initial guess.
struct JacobianCheckResult {
  double max_rel_hadamard = 0.0;
  double max_rel_kron = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

JacobianCheckResult jacobian_check(const RunConfig& cfg,
                                   std::size_t n_points = 5);

}  // namespace hadfem
