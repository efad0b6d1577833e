#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hadfem/basis.hpp"
#include "hadfem/problem.hpp"
#include "hadfem/quadrature.hpp"
#include "hadfem/systems.hpp"

namespace hadfem {

// How essential (Dirichlet) conditions enter the discrete system.
//
// eliminate: constrained coefficients are removed from the unknown set.
//   For hat functions the end nodes are fixed at the prescribed values; for
//   modal sets an end-adapted basis (every function zero at the constrained
//   end) must be used and only homogeneous values are representable.
//   Neumann data is substituted into the boundary flux term and lands in the
//   load vector.
//
// weak: nothing is eliminated. The boundary flux from integration by parts
//   stays in the matrix, and both condition types are appended as boundary
//   residual terms with the signs
//     - sum over Neumann ends of (du/dn - qbar) phi_j
//     + sum over Dirichlet ends of (u - ubar) dphi_j/dn
enum class BoundaryMode { eliminate, weak };

struct AssemblyOptions {
  BoundaryMode mode = BoundaryMode::eliminate;
};

// Mapping between basis functions and unknowns.
struct DofMap {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::size_t n_basis = 0;
  std::vector<std::size_t> free;      // basis indices of unknowns, ascending
  std::vector<std::size_t> free_pos;  // basis index -> unknown index or npos

  struct Fixed {
    std::size_t index;
    double value;
  };
  std::vector<Fixed> fixed;

  std::size_t dim() const { return free.size(); }
  bool all_free() const { return fixed.empty(); }
};

DofMap make_dof_map(const BasisSet& basis, const BoundarySpec& bc,
                    BoundaryMode mode);

// Expands an unknown vector to full basis coefficients, filling constrained
// slots with their prescribed values.
Vector full_coefficients(const DofMap& dof, const Vector& x);

// Non-fatal observations made during assembly, e.g. a quadrature rule that
// provably cannot integrate a polynomial integrand exactly.
struct AssemblyInfo {
  std::vector<std::string> warnings;
};

// Reference rule matched to the basis: 3-point Gauss per element for hats,
// (n + 2)-point Gauss (capped at 64) per panel for modal sets.
QuadratureRule default_rule(const BasisSet& basis);

// M[j, i] = integral of c(x) * phi_i^(order)(x) * phi_j(x) summed over the
// operator terms; a second-order term is integrated by parts and contributes
// -integral of c * phi_i' * phi_j' plus, in weak mode, its boundary flux.
// Rows and columns range over the free unknowns of the dof map.
Matrix assemble_weighted(const LinearOperator& op, const BasisSet& basis,
                         const QuadratureRule& rule, const BoundarySpec& bc,
                         const AssemblyOptions& opts, QuadCounter& counter,
                         AssemblyInfo* info = nullptr);

// b[j] = integral of f * phi_j plus boundary data:
//   eliminate: Neumann substitution (-c2 * qbar * phi_j at Neumann ends) and
//     lift contributions from nonzero fixed values of linear problems;
//   weak: -qbar * phi_j at Neumann ends, +ubar * dphi_j/dn at Dirichlet ends.
// The operator argument supplies the flux coefficient c2 and the lift terms.
Vector assemble_load(const ScalarField& f, std::optional<int> f_degree,
                     const LinearOperator& l, const BasisSet& basis,
                     const QuadratureRule& rule, const BoundarySpec& bc,
                     const AssemblyOptions& opts, QuadCounter& counter,
                     AssemblyInfo* info = nullptr);

// G[j, i*n + k] = integral of p(phi_i) * q(phi_k) * phi_j, the tensor of the
// quadratic term in the classical discretization.
Matrix assemble_product_tensor(const LinearOperator& p, const LinearOperator& q,
                               const BasisSet& basis, const QuadratureRule& rule,
                               const BoundarySpec& bc,
                               const AssemblyOptions& opts, QuadCounter& counter,
                               AssemblyInfo* info = nullptr);

// Weak-mode boundary residual terms that do not belong to any one operator:
// the parts of the Neumann and Dirichlet condition rows that are linear in
// the trial solution. (Their data parts live in assemble_load.)
void add_weak_constraint_matrix(Matrix& d, const BasisSet& basis,
                                const BoundarySpec& bc, const DofMap& dof);

// (A x) .* (B x) + D x = b with A, B the weighted forms of the product
// factors, D the weighted form of the linear part.
HadamardSystem assemble_hadamard(const Problem& problem, const BasisSet& basis,
                                 const QuadratureRule& rule,
                                 const AssemblyOptions& opts,
                                 QuadCounter& counter,
                                 AssemblyInfo* info = nullptr);

// D x + G (x (x) x) = b, the classical discretization of the same problem.
KroneckerSystem assemble_kronecker(const Problem& problem,
                                   const BasisSet& basis,
                                   const QuadratureRule& rule,
                                   const AssemblyOptions& opts,
                                   QuadCounter& counter,
                                   AssemblyInfo* info = nullptr);

// Weighted residual of the current iterate evaluated by quadrature, the way
// a classical solver re-integrates the nonlinear term every iteration.
// Matches residual(assemble_kronecker(...), x) up to rounding.
Vector residual_direct(const Problem& problem, const BasisSet& basis,
                       const QuadratureRule& rule, const AssemblyOptions& opts,
                       const Vector& x, QuadCounter& counter);

}  // namespace hadfem
