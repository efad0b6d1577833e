#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hadfem/assembly.hpp"
#include "hadfem/systems.hpp"

namespace hadfem {

enum class Method { newton_sjt, newton_fd, picard };

// Which factor of (A x) .* (B x) the Picard iteration freezes at the
// current iterate.
enum class PicardFreeze { freeze_p, freeze_q };

struct SolverConfig {
  Method method = Method::newton_sjt;
  double tol = 1e-10;           // on the max-norm of the residual
  std::size_t max_iter = 50;
  double damping = 1.0;         // step fraction in (0, 1]
  double fd_step = 1e-6;        // scaled per column by (1 + |x_j|)
  PicardFreeze picard_freeze = PicardFreeze::freeze_p;

  void validate() const;
};

// residual_history[0] is the residual norm of the initial guess; one entry
// is appended per update, so iterates == residual_history.size() - 1. At
// least one update is always attempted: convergence is judged after a step,
// so a linear solve reports one iterate even from an exact initial guess.
// An abnormal stop (singular Jacobian, non-finite iterate) leaves converged
// false and an explanation in failure; no exception escapes the iteration.
struct SolveReport {
  bool converged = false;
  std::size_t iterates = 0;
  std::vector<double> residual_history;
  Vector solution;
  std::string failure;
  // Integrand evaluations ticked while building the system and while
  // iterating on it. Assembly belongs to the caller and is filled in by the
  // benchmark layer; the iteration count is zero unless the solve
  // re-integrates residuals (solve_reintegrating).
  std::uint64_t quad_evals_assembly = 0;
  std::uint64_t quad_evals_iteration = 0;
  double wall_time_s = 0.0;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

// Central differences, column step fd_step * (1 + |x_j|).
Matrix fd_jacobian(const ResidualFn& r, const Vector& x, double step);

// Damped Newton on arbitrary residual/Jacobian closures.
SolveReport newton_solve(const ResidualFn& r, const JacobianFn& j,
                         const Vector& x0, const SolverConfig& cfg);

// Newton on a stored system. newton_sjt uses the analytic Jacobian of the
// form (diagonal row scalings plus D; no re-integration), newton_fd uses
// finite differences on the stored residual.
SolveReport newton_solve(const HadamardSystem& sys, const Vector& x0,
                         const SolverConfig& cfg);
SolveReport newton_solve(const KroneckerSystem& sys, const Vector& x0,
                         const SolverConfig& cfg);

// Fixed-point iteration [diag(frozen) B + D] x_next = b with a damped blend
// toward x_next. Requires the factored product form.
SolveReport picard_solve(const HadamardSystem& sys, const Vector& x0,
                         const SolverConfig& cfg);

// Dispatches on cfg.method; picard with a Kronecker system throws
// std::invalid_argument.
SolveReport solve(const HadamardSystem& sys, const Vector& x0,
                  const SolverConfig& cfg);
SolveReport solve(const KroneckerSystem& sys, const Vector& x0,
                  const SolverConfig& cfg);

// The classical loop: the Jacobian comes from the stored tensor system, but
// every residual evaluation re-integrates the nonlinear term by quadrature
// (ticking iteration_counter). The Hadamard path has no such counterpart;
// its per-iteration quadrature cost is structurally zero.
SolveReport solve_reintegrating(const Problem& problem, const BasisSet& basis,
                                const QuadratureRule& rule,
                                const AssemblyOptions& opts,
                                const KroneckerSystem& sys, const Vector& x0,
                                const SolverConfig& cfg,
                                QuadCounter& iteration_counter);

// D^{-1} b, falling back to zeros when D is singular.
Vector default_initial_guess(const Matrix& d, const Vector& b);

}  // namespace hadfem
