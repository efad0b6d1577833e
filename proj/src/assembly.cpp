#include "hadfem/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hadfem {

namespace {

constexpr std::size_t kModalPanels = 4;

struct Panel {
  double x0, x1;
  std::size_t first, last;  // inclusive range of basis indices alive here
};

std::vector<Panel> panels_for(const BasisSet& basis) {
  std::vector<Panel> out;
  if (basis.kind() == BasisKind::fe_hat) {
    const auto& nd = basis.nodes();
    out.reserve(nd.size() - 1);
    for (std::size_t e = 0; e + 1 < nd.size(); ++e)
      out.push_back({nd[e], nd[e + 1], e, e + 1});
  } else {
    const Domain1D& dom = basis.domain();
    const double h = dom.length() / static_cast<double>(kModalPanels);
    for (std::size_t k = 0; k < kModalPanels; ++k) {
      const double x0 = dom.a + h * static_cast<double>(k);
      const double x1 = k + 1 == kModalPanels ? dom.b : x0 + h;
      out.push_back({x0, x1, 0, basis.size() - 1});
    }
  }
  return out;
}

template <typename F>
void for_each_point(const BasisSet& basis, const QuadratureRule& rule, F&& f) {
  for (const Panel& p : panels_for(basis)) {
    const MappedQuadrature mq = map_to_interval(rule, p.x0, p.x1);
    for (std::size_t q = 0; q < mq.points.size(); ++q)
      f(p, mq.points[q], mq.weights[q]);
  }
}

struct Endpoint {
  double x;
  double normal;  // outward: -1 on the left, +1 on the right
  const BoundaryCondition* cond;
};

std::array<Endpoint, 2> endpoints(const BasisSet& basis,
                                  const BoundarySpec& bc) {
  return {Endpoint{basis.domain().a, -1.0, &bc.left},
          Endpoint{basis.domain().b, +1.0, &bc.right}};
}

// Largest polynomial degree a basis function reaches (per panel for hats).
int basis_poly_degree(const BasisSet& basis) {
  if (basis.kind() == BasisKind::fe_hat) return 1;
  int d = static_cast<int>(basis.size()) - 1;
  if (basis.zero_at_left()) ++d;
  if (basis.zero_at_right()) ++d;
  return d;
}

void warn_if_inexact(AssemblyInfo* info, const QuadratureRule& rule,
                     const std::string& label, int integrand_degree) {
  if (!info) return;
  if (integrand_degree > rule.exact_degree())
    info->warnings.push_back(
        "quadrature: " + label + " integrand of degree " +
        std::to_string(integrand_degree) + " exceeds rule exactness " +
        std::to_string(rule.exact_degree()));
}

void warn_operator(AssemblyInfo* info, const QuadratureRule& rule,
                   const LinearOperator& op, const BasisSet& basis,
                   const char* what) {
  if (!info) return;
  const int bd = basis_poly_degree(basis);
  for (const auto& t : op.terms()) {
    if (!t.coeff_degree) continue;
    const int trial = t.order == 2 ? bd - 1 : std::max(bd - t.order, 0);
    const int weight = t.order == 2 ? bd - 1 : bd;
    warn_if_inexact(info, rule,
                    std::string(what) + " term (order " +
                        std::to_string(t.order) + ")",
                    *t.coeff_degree + trial + weight);
  }
}

void check_unknown_count(const DofMap& dof) {
  if (dof.dim() == 0)
    throw std::invalid_argument(
        "assembly: boundary elimination leaves no unknowns; refine the basis");
}

// Weak contribution of one operator term applied to a trial function with
// values (v, dv) against a weight with values (wv, dwv).
double weak_pair(const OperatorTerm& t, double c, double v, double dv,
                 double wv, double dwv) {
  if (t.order == 2) return -c * dv * dwv;
  return c * (t.order == 0 ? v : dv) * wv;
}

}  // namespace

DofMap make_dof_map(const BasisSet& basis, const BoundarySpec& bc,
                    BoundaryMode mode) {
  DofMap dof;
  dof.n_basis = basis.size();
  dof.free_pos.assign(basis.size(), DofMap::npos);

  if (mode == BoundaryMode::eliminate) {
    if (basis.kind() == BasisKind::fe_hat) {
      if (bc.left.kind == BcKind::dirichlet)
        dof.fixed.push_back({0, bc.left.value});
      if (bc.right.kind == BcKind::dirichlet)
        dof.fixed.push_back({basis.size() - 1, bc.right.value});
    } else {
      auto check_side = [&](const BoundaryCondition& c, bool adapted,
                            const char* side) {
        if (c.kind != BcKind::dirichlet) return;
        if (!adapted)
          throw std::invalid_argument(
              std::string("eliminate mode: modal basis does not vanish at the ") +
              side + " Dirichlet end; build it with modal_adapted");
        if (c.value != 0.0)
          throw std::invalid_argument(
              "eliminate mode: a modal basis cannot carry a nonzero Dirichlet "
              "value; use fe_hat or weak mode");
      };
      check_side(bc.left, basis.zero_at_left(), "left");
      check_side(bc.right, basis.zero_at_right(), "right");
    }
  }

  auto is_fixed = [&](std::size_t j) {
    return std::any_of(dof.fixed.begin(), dof.fixed.end(),
                       [j](const DofMap::Fixed& f) { return f.index == j; });
  };
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (is_fixed(j)) continue;
    dof.free_pos[j] = dof.free.size();
    dof.free.push_back(j);
  }
  check_unknown_count(dof);
  return dof;
}

Vector full_coefficients(const DofMap& dof, const Vector& x) {
  if (x.size() != dof.dim())
    throw ShapeError("full_coefficients: got " + std::to_string(x.size()) +
                     " unknowns, dof map has " + std::to_string(dof.dim()));
  Vector full(dof.n_basis);
  for (std::size_t k = 0; k < dof.free.size(); ++k) full[dof.free[k]] = x[k];
  for (const auto& f : dof.fixed) full[f.index] = f.value;
  return full;
}

QuadratureRule default_rule(const BasisSet& basis) {
  if (basis.kind() == BasisKind::fe_hat)
    return QuadratureRule::gauss_legendre(3);
  return QuadratureRule::gauss_legendre(std::min<std::size_t>(basis.size() + 2, 64));
}

Matrix assemble_weighted(const LinearOperator& op, const BasisSet& basis,
                         const QuadratureRule& rule, const BoundarySpec& bc,
                         const AssemblyOptions& opts, QuadCounter& counter,
                         AssemblyInfo* info) {
  const DofMap dof = make_dof_map(basis, bc, opts.mode);
  Matrix m(dof.dim(), dof.dim());
  if (op.is_zero()) return m;

  std::vector<double> vals, ders;
  for_each_point(basis, rule, [&](const Panel& p, double xq, double w) {
    basis.eval_all(xq, vals, ders);
    for (const auto& term : op.terms()) {
      const double c = term.coeff(xq);
      for (std::size_t j = p.first; j <= p.last; ++j) {
        const std::size_t row = dof.free_pos[j];
        if (row == DofMap::npos) continue;
        counter.add();
        const double wj =
            term.order == 2 ? -w * c * ders[j] : w * c * vals[j];
        for (std::size_t i = p.first; i <= p.last; ++i) {
          const std::size_t col = dof.free_pos[i];
          if (col == DofMap::npos) continue;
          m(row, col) += wj * (term.order == 0 ? vals[i] : ders[i]);
        }
      }
    }
  });

  if (opts.mode == BoundaryMode::weak) {
    if (const OperatorTerm* t2 = op.second_order_term()) {
      // Boundary flux from integration by parts: + c2 * du/dn * phi_j at
      // both ends (boundary evaluations, not quadrature: no ticks).
      for (const Endpoint& e : endpoints(basis, bc)) {
        const double c2 = t2->coeff(e.x);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const std::size_t row = dof.free_pos[j];
          if (row == DofMap::npos) continue;
          const double wj = basis.eval(j, e.x, 0);
          if (wj == 0.0) continue;
          for (std::size_t i = 0; i < basis.size(); ++i) {
            const std::size_t col = dof.free_pos[i];
            if (col == DofMap::npos) continue;
            m(row, col) += c2 * e.normal * basis.eval(i, e.x, 1) * wj;
          }
        }
      }
    }
  }

  warn_operator(info, rule, op, basis, "weighted");
  return m;
}

Vector assemble_load(const ScalarField& f, std::optional<int> f_degree,
                     const LinearOperator& l, const BasisSet& basis,
                     const QuadratureRule& rule, const BoundarySpec& bc,
                     const AssemblyOptions& opts, QuadCounter& counter,
                     AssemblyInfo* info) {
  if (!f) throw std::invalid_argument("assemble_load: forcing term required");
  const DofMap dof = make_dof_map(basis, bc, opts.mode);
  Vector b(dof.dim());

  std::vector<double> vals, ders;
  for_each_point(basis, rule, [&](const Panel& p, double xq, double w) {
    const double fv = f(xq);
    basis.eval_all(xq, vals, ders);
    for (std::size_t j = p.first; j <= p.last; ++j) {
      const std::size_t row = dof.free_pos[j];
      if (row == DofMap::npos) continue;
      counter.add();
      b[row] += w * fv * vals[j];
    }
  });

  const OperatorTerm* t2 = l.second_order_term();
  for (const Endpoint& e : endpoints(basis, bc)) {
    if (opts.mode == BoundaryMode::eliminate) {
      if (e.cond->kind == BcKind::neumann && t2) {
        // Substituting du/dn = qbar into the flux term moves
        // c2 * qbar * phi_j to the other side.
        const double c2 = t2->coeff(e.x);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const std::size_t row = dof.free_pos[j];
          if (row == DofMap::npos) continue;
          b[row] -= c2 * e.cond->value * basis.eval(j, e.x, 0);
        }
      }
    } else {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const std::size_t row = dof.free_pos[j];
        if (row == DofMap::npos) continue;
        if (e.cond->kind == BcKind::neumann)
          b[row] -= e.cond->value * basis.eval(j, e.x, 0);
        else
          b[row] += e.cond->value * e.normal * basis.eval(j, e.x, 1);
      }
    }
  }

  // Lift: nonzero fixed coefficients of a linear problem contribute
  // -ubar * (weak form of l applied to the fixed function) to the load.
  for (const auto& fx : dof.fixed) {
    if (fx.value == 0.0 || l.is_zero()) continue;
    for_each_point(basis, rule, [&](const Panel& p, double xq, double w) {
      if (fx.index < p.first || fx.index > p.last) return;
      basis.eval_all(xq, vals, ders);
      if (vals[fx.index] == 0.0 && ders[fx.index] == 0.0) return;
      for (const auto& term : l.terms()) {
        const double c = term.coeff(xq);
        for (std::size_t j = p.first; j <= p.last; ++j) {
          const std::size_t row = dof.free_pos[j];
          if (row == DofMap::npos) continue;
          counter.add();
          b[row] -= fx.value * w *
                    weak_pair(term, c, vals[fx.index], ders[fx.index],
                              vals[j], ders[j]);
        }
      }
    });
  }

  if (info && f_degree)
    warn_if_inexact(info, rule, "load", *f_degree + basis_poly_degree(basis));
  return b;
}

Matrix assemble_product_tensor(const LinearOperator& p, const LinearOperator& q,
                               const BasisSet& basis, const QuadratureRule& rule,
                               const BoundarySpec& bc,
                               const AssemblyOptions& opts, QuadCounter& counter,
                               AssemblyInfo* info) {
  const DofMap dof = make_dof_map(basis, bc, opts.mode);
  const std::size_t n = dof.dim();
  Matrix g(n, n * n);
  if (p.is_zero() || q.is_zero()) return g;

  std::vector<double> vals, ders, pv(basis.size()), qv(basis.size());
  for_each_point(basis, rule, [&](const Panel& pan, double xq, double w) {
    basis.eval_all(xq, vals, ders);
    for (std::size_t s = pan.first; s <= pan.last; ++s) {
      double a = 0.0, c = 0.0;
      for (const auto& t : p.terms())
        a += t.coeff(xq) * (t.order == 0 ? vals[s] : ders[s]);
      for (const auto& t : q.terms())
        c += t.coeff(xq) * (t.order == 0 ? vals[s] : ders[s]);
      pv[s] = a;
      qv[s] = c;
    }
    for (std::size_t j = pan.first; j <= pan.last; ++j) {
      const std::size_t row = dof.free_pos[j];
      if (row == DofMap::npos) continue;
      counter.add();
      const double wj = w * vals[j];
      double* grow = g.row(row);
      for (std::size_t i = pan.first; i <= pan.last; ++i) {
        const std::size_t ci = dof.free_pos[i];
        if (ci == DofMap::npos) continue;
        const double wi = wj * pv[i];
        for (std::size_t k = pan.first; k <= pan.last; ++k) {
          const std::size_t ck = dof.free_pos[k];
          if (ck == DofMap::npos) continue;
          grow[ci * n + ck] += wi * qv[k];
        }
      }
    }
  });

  if (info) {
    const int bd = basis_poly_degree(basis);
    for (const auto& tp : p.terms())
      for (const auto& tq : q.terms()) {
        if (!tp.coeff_degree || !tq.coeff_degree) continue;
        const int d = *tp.coeff_degree + std::max(bd - tp.order, 0) +
                      *tq.coeff_degree + std::max(bd - tq.order, 0) + bd;
        warn_if_inexact(info, rule,
                        "product term (orders " + std::to_string(tp.order) +
                            "," + std::to_string(tq.order) + ")",
                        d);
      }
  }
  return g;
}

void add_weak_constraint_matrix(Matrix& d, const BasisSet& basis,
                                const BoundarySpec& bc, const DofMap& dof) {
  if (d.rows() != dof.dim() || d.cols() != dof.dim())
    throw ShapeError("add_weak_constraint_matrix: matrix is " +
                     detail::shape_str(d.rows(), d.cols()) +
                     ", dof map has dimension " + std::to_string(dof.dim()));
  for (const Endpoint& e : endpoints(basis, bc)) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const std::size_t row = dof.free_pos[j];
      if (row == DofMap::npos) continue;
      const double wv = basis.eval(j, e.x, 0);
      const double wd = basis.eval(j, e.x, 1);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::size_t col = dof.free_pos[i];
        if (col == DofMap::npos) continue;
        if (e.cond->kind == BcKind::neumann) {
          // - (du/dn - qbar) phi_j: linear part.
          d(row, col) -= e.normal * basis.eval(i, e.x, 1) * wv;
        } else {
          // + (u - ubar) dphi_j/dn: linear part.
          d(row, col) += basis.eval(i, e.x, 0) * e.normal * wd;
        }
      }
    }
  }
}

namespace {

void check_problem_setup(const Problem& pb, const AssemblyOptions& opts) {
  pb.validate();
  if (opts.mode == BoundaryMode::eliminate && pb.has_product()) {
    const bool nonzero_essential =
        (pb.bc.left.kind == BcKind::dirichlet && pb.bc.left.value != 0.0) ||
        (pb.bc.right.kind == BcKind::dirichlet && pb.bc.right.value != 0.0);
    if (nonzero_essential)
      throw std::invalid_argument(
          "assembly: eliminating a nonzero Dirichlet value under a quadratic "
          "term leaves affine residues the product form cannot hold; use weak "
          "mode or homogenize the problem");
  }
}

}  // namespace

HadamardSystem assemble_hadamard(const Problem& problem, const BasisSet& basis,
                                 const QuadratureRule& rule,
                                 const AssemblyOptions& opts,
                                 QuadCounter& counter, AssemblyInfo* info) {
  check_problem_setup(problem, opts);
  const DofMap dof = make_dof_map(basis, problem.bc, opts.mode);
  Matrix a(dof.dim(), dof.dim());
  Matrix bm(dof.dim(), dof.dim());
  if (problem.has_product()) {
    a = assemble_weighted(problem.p, basis, rule, problem.bc, opts, counter,
                          info);
    bm = assemble_weighted(problem.q, basis, rule, problem.bc, opts, counter,
                           info);
  }
  Matrix d = assemble_weighted(problem.l, basis, rule, problem.bc, opts,
                               counter, info);
  Vector rhs = assemble_load(problem.f, problem.f_degree, problem.l, basis,
                             rule, problem.bc, opts, counter, info);
  if (opts.mode == BoundaryMode::weak)
    add_weak_constraint_matrix(d, basis, problem.bc, dof);
  return HadamardSystem(std::move(a), std::move(bm), std::move(d),
                        std::move(rhs));
}

KroneckerSystem assemble_kronecker(const Problem& problem,
                                   const BasisSet& basis,
                                   const QuadratureRule& rule,
                                   const AssemblyOptions& opts,
                                   QuadCounter& counter, AssemblyInfo* info) {
  check_problem_setup(problem, opts);
  const DofMap dof = make_dof_map(basis, problem.bc, opts.mode);
  Matrix d = assemble_weighted(problem.l, basis, rule, problem.bc, opts,
                               counter, info);
  Matrix g = assemble_product_tensor(problem.p, problem.q, basis, rule,
                                     problem.bc, opts, counter, info);
  Vector rhs = assemble_load(problem.f, problem.f_degree, problem.l, basis,
                             rule, problem.bc, opts, counter, info);
  if (opts.mode == BoundaryMode::weak)
    add_weak_constraint_matrix(d, basis, problem.bc, dof);
  return KroneckerSystem(std::move(d), std::move(g), std::move(rhs));
}

Vector residual_direct(const Problem& problem, const BasisSet& basis,
                       const QuadratureRule& rule, const AssemblyOptions& opts,
                       const Vector& x, QuadCounter& counter) {
  check_problem_setup(problem, opts);
  const DofMap dof = make_dof_map(basis, problem.bc, opts.mode);
  if (x.size() != dof.dim())
    throw ShapeError("residual_direct: iterate has " +
                     std::to_string(x.size()) + " entries, expected " +
                     std::to_string(dof.dim()));
  const Vector full = full_coefficients(dof, x);
  Vector r(dof.dim());

  const bool product = problem.has_product();
  std::vector<double> vals, ders;
  for_each_point(basis, rule, [&](const Panel& p, double xq, double w) {
    const double uh = basis.eval_expansion(full, xq, 0);
    const double duh = basis.eval_expansion(full, xq, 1);
    const double pv = product ? problem.p.apply(uh, duh, 0.0, xq) : 0.0;
    const double qv = product ? problem.q.apply(uh, duh, 0.0, xq) : 0.0;
    const double fv = problem.f(xq);
    basis.eval_all(xq, vals, ders);
    for (std::size_t j = p.first; j <= p.last; ++j) {
      const std::size_t row = dof.free_pos[j];
      if (row == DofMap::npos) continue;
      if (product) {
        counter.add();
        r[row] += w * pv * qv * vals[j];
      }
      for (const auto& term : problem.l.terms()) {
        counter.add();
        const double c = term.coeff(xq);
        if (term.order == 2)
          r[row] -= w * c * duh * ders[j];
        else
          r[row] += w * c * (term.order == 0 ? uh : duh) * vals[j];
      }
      counter.add();
      r[row] -= w * fv * vals[j];
    }
  });

  const OperatorTerm* t2 = problem.l.second_order_term();
  for (const Endpoint& e : endpoints(basis, problem.bc)) {
    if (opts.mode == BoundaryMode::eliminate) {
      if (e.cond->kind == BcKind::neumann && t2) {
        const double c2 = t2->coeff(e.x);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const std::size_t row = dof.free_pos[j];
          if (row == DofMap::npos) continue;
          r[row] += c2 * e.cond->value * basis.eval(j, e.x, 0);
        }
      }
      continue;
    }
    const double ue = basis.eval_expansion(full, e.x, 0);
    const double dudn = e.normal * basis.eval_expansion(full, e.x, 1);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const std::size_t row = dof.free_pos[j];
      if (row == DofMap::npos) continue;
      const double wv = basis.eval(j, e.x, 0);
      if (t2) r[row] += t2->coeff(e.x) * dudn * wv;
      if (e.cond->kind == BcKind::neumann)
        r[row] -= (dudn - e.cond->value) * wv;
      else
        r[row] += (ue - e.cond->value) * e.normal * basis.eval(j, e.x, 1);
    }
  }
  return r;
}

}  // namespace hadfem
