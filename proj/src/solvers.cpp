#include "hadfem/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace hadfem {

void SolverConfig::validate() const {
  if (!(tol > 0.0))
    throw std::invalid_argument("solver: tol must be positive");
  if (max_iter == 0)
    throw std::invalid_argument("solver: max_iter must be at least 1");
  if (!(damping > 0.0) || damping > 1.0)
    throw std::invalid_argument("solver: damping must lie in (0, 1]");
  if (!(fd_step > 0.0))
    throw std::invalid_argument("solver: fd_step must be positive");
}

Matrix fd_jacobian(const ResidualFn& r, const Vector& x, double step) {
  if (!(step > 0.0))
    throw std::invalid_argument("fd_jacobian: step must be positive");
  Vector xp = x, xm = x;
  Matrix j;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double h = step * (1.0 + std::abs(x[c]));
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    const Vector rp = r(xp);
    const Vector rm = r(xm);
    if (c == 0) j = Matrix(rp.size(), x.size());
    if (rp.size() != j.rows() || rm.size() != j.rows())
      throw ShapeError("fd_jacobian: residual size changed between calls");
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t row = 0; row < j.rows(); ++row)
      j(row, c) = (rp[row] - rm[row]) * inv;
    xp[c] = x[c];
    xm[c] = x[c];
  }
  if (x.size() == 0) j = Matrix(0, 0);
  return j;
}

namespace {

bool push_residual(SolveReport& rep, const Vector& r, double& rn) {
  rn = norm_inf(r);
  if (!std::isfinite(rn) || !r.all_finite()) {
    rep.failure = "residual became non-finite";
    return false;
  }
  rep.residual_history.push_back(rn);
  return true;
}

// One residual evaluation per update plus one for the initial guess; the
// step callback receives the residual already evaluated at x. At least one
// update is attempted before convergence is judged, so linear problems
// report exactly one iterate no matter how good the initial guess is.
template <typename Step>
SolveReport iterate(const ResidualFn& rf, Vector x, const SolverConfig& cfg,
                    Step&& step) {
  cfg.validate();
  SolveReport rep;
  Vector r = rf(x);
  double rn = 0.0;
  if (!push_residual(rep, r, rn)) {
    rep.failure = "residual not finite at the initial guess";
    rep.solution = std::move(x);
    return rep;
  }
  for (std::size_t k = 0; k < cfg.max_iter; ++k) {
    try {
      step(x, r);
    } catch (const SingularMatrixError& e) {
      rep.failure = e.what();
      break;
    }
    if (!x.all_finite()) {
      rep.failure = "iterate became non-finite";
      break;
    }
    r = rf(x);
    if (!push_residual(rep, r, rn)) break;
    if (rn <= cfg.tol) break;
  }
  rep.iterates = rep.residual_history.size() - 1;
  rep.converged = rep.failure.empty() && rn <= cfg.tol &&
                  rep.iterates > 0;
  rep.solution = std::move(x);
  return rep;
}

}  // namespace

SolveReport newton_solve(const ResidualFn& rf, const JacobianFn& jf,
                         const Vector& x0, const SolverConfig& cfg) {
  return iterate(rf, x0, cfg, [&](Vector& x, const Vector& r) {
    const Vector dx = lu_solve(jf(x), r);
    axpy(-cfg.damping, dx, x);
  });
}

SolveReport newton_solve(const HadamardSystem& sys, const Vector& x0,
                         const SolverConfig& cfg) {
  ResidualFn rf = [&sys](const Vector& x) { return residual(sys, x); };
  if (cfg.method == Method::newton_fd)
    return newton_solve(
        rf, [&](const Vector& x) { return fd_jacobian(rf, x, cfg.fd_step); },
        x0, cfg);
  return newton_solve(
      rf, [&sys](const Vector& x) { return jacobian(sys, x); }, x0, cfg);
}

SolveReport newton_solve(const KroneckerSystem& sys, const Vector& x0,
                         const SolverConfig& cfg) {
  ResidualFn rf = [&sys](const Vector& x) { return residual(sys, x); };
  if (cfg.method == Method::newton_fd)
    return newton_solve(
        rf, [&](const Vector& x) { return fd_jacobian(rf, x, cfg.fd_step); },
        x0, cfg);
  return newton_solve(
      rf, [&sys](const Vector& x) { return jacobian(sys, x); }, x0, cfg);
}

SolveReport picard_solve(const HadamardSystem& sys, const Vector& x0,
                         const SolverConfig& cfg) {
  ResidualFn rf = [&sys](const Vector& x) { return residual(sys, x); };
  return iterate(rf, x0, cfg, [&](Vector& x, const Vector&) {
    const bool fp = cfg.picard_freeze == PicardFreeze::freeze_p;
    const Vector frozen = matvec(fp ? sys.A : sys.B, x);
    Matrix m = scale_rows(frozen, fp ? sys.B : sys.A);
    m += sys.D;
    const Vector xn = lu_solve(m, sys.b);
    x *= 1.0 - cfg.damping;
    axpy(cfg.damping, xn, x);
  });
}

SolveReport solve(const HadamardSystem& sys, const Vector& x0,
                  const SolverConfig& cfg) {
  if (cfg.method == Method::picard) return picard_solve(sys, x0, cfg);
  return newton_solve(sys, x0, cfg);
}

SolveReport solve(const KroneckerSystem& sys, const Vector& x0,
                  const SolverConfig& cfg) {
  if (cfg.method == Method::picard)
    throw std::invalid_argument(
        "solver: the fixed-point iteration freezes one product factor and "
        "needs the factored form, not the tensor form");
  return newton_solve(sys, x0, cfg);
}

SolveReport solve_reintegrating(const Problem& problem, const BasisSet& basis,
                                const QuadratureRule& rule,
                                const AssemblyOptions& opts,
                                const KroneckerSystem& sys, const Vector& x0,
                                const SolverConfig& cfg,
                                QuadCounter& iteration_counter) {
  if (cfg.method == Method::picard)
    throw std::invalid_argument(
        "solver: the fixed-point iteration requires the factored form");
  ResidualFn rf = [&](const Vector& x) {
    return residual_direct(problem, basis, rule, opts, x, iteration_counter);
  };
  const std::uint64_t start = iteration_counter.value();
  SolveReport rep;
  if (cfg.method == Method::newton_fd)
    rep = newton_solve(
        rf, [&](const Vector& x) { return fd_jacobian(rf, x, cfg.fd_step); },
        x0, cfg);
  else
    rep = newton_solve(
        rf, [&sys](const Vector& x) { return jacobian(sys, x); }, x0, cfg);
  rep.quad_evals_iteration = iteration_counter.value() - start;
  return rep;
}

Vector default_initial_guess(const Matrix& d, const Vector& b) {
  try {
    Vector x = lu_solve(d, b);
    if (x.all_finite()) return x;
  } catch (const SingularMatrixError&) {
  }
  return Vector(b.size());
}

}  // namespace hadfem
