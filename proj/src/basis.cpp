#include "hadfem/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "legendre.hpp"

namespace hadfem {

namespace {

void check_domain(const Domain1D& dom) {
  if (!(dom.a < dom.b) || !std::isfinite(dom.a) || !std::isfinite(dom.b))
    throw std::invalid_argument("basis: domain requires finite a < b");
}

// Modal functions are combinations of Legendre polynomials on the reference
// interval; sign pattern P_k(-1) = (-1)^k.
double neg1_pow(std::size_t k) { return k % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

BasisSet BasisSet::fe_hat(const Domain1D& dom, std::size_t n_nodes) {
  check_domain(dom);
  if (n_nodes < 2)
    throw std::invalid_argument("fe_hat: need at least 2 nodes, got " +
                                std::to_string(n_nodes));
  std::vector<double> nodes(n_nodes);
  const double h = dom.length() / static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i)
    nodes[i] = dom.a + h * static_cast<double>(i);
  nodes.back() = dom.b;
  return fe_hat(std::move(nodes));
}

BasisSet BasisSet::fe_hat(std::vector<double> nodes) {
  if (nodes.size() < 2)
    throw std::invalid_argument("fe_hat: need at least 2 nodes");
  if (!std::is_sorted(nodes.begin(), nodes.end()) ||
      std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw std::invalid_argument("fe_hat: nodes must be strictly increasing");
  BasisSet basis;
  basis.kind_ = BasisKind::fe_hat;
  basis.dom_ = {nodes.front(), nodes.back()};
  check_domain(basis.dom_);
  basis.size_ = nodes.size();
  basis.nodes_ = std::move(nodes);
  return basis;
}

BasisSet BasisSet::modal(const Domain1D& dom, std::size_t n) {
  return modal_adapted(dom, n, false, false);
}

BasisSet BasisSet::modal_adapted(const Domain1D& dom, std::size_t n,
                                 bool zero_left, bool zero_right) {
  check_domain(dom);
  if (n < 1)
    throw std::invalid_argument("modal: need at least 1 function");
  BasisSet basis;
  basis.kind_ = BasisKind::modal_poly;
  basis.dom_ = dom;
  basis.size_ = n;
  basis.zero_left_ = zero_left;
  basis.zero_right_ = zero_right;
  return basis;
}

const std::vector<double>& BasisSet::nodes() const {
  if (kind_ != BasisKind::fe_hat)
    throw std::logic_error("nodes(): basis has no node set");
  return nodes_;
}

void BasisSet::check_point(double x, int deriv) const {
  if (deriv < 0 || deriv > 1)
    throw std::invalid_argument(
        "basis eval: deriv must be 0 or 1 (higher orders are handled weakly)");
  if (!(x >= dom_.a && x <= dom_.b))
    throw std::domain_error("basis eval: x = " + std::to_string(x) +
                            " outside [" + std::to_string(dom_.a) + ", " +
                            std::to_string(dom_.b) + "]");
}

std::size_t BasisSet::element_of(double x) const {
  // Right-open intervals, except the last element also owns x = b. This
  // realizes the right-limit convention for derivatives at interior nodes.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t e = it == nodes_.begin()
                      ? 0
                      : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(e, nodes_.size() - 2);
}

double BasisSet::eval(std::size_t j, double x, int deriv) const {
  check_point(x, deriv);
  if (j >= size_)
    throw std::out_of_range("basis eval: index " + std::to_string(j) +
                            " out of range for size " + std::to_string(size_));
  if (kind_ == BasisKind::fe_hat) {
    const std::size_t e = element_of(x);
    const double h = nodes_[e + 1] - nodes_[e];
    if (j == e) return deriv ? -1.0 / h : (nodes_[e + 1] - x) / h;
    if (j == e + 1) return deriv ? 1.0 / h : (x - nodes_[e]) / h;
    return 0.0;
  }

  const double t = 2.0 / dom_.length();
  const double xi = (2.0 * x - dom_.a - dom_.b) / dom_.length();
  const double scale = deriv ? t : 1.0;
  if (zero_left_ && zero_right_) {
    // phi_j = P_{j+2} - P_j (equivalently phi_j' = (2j+3) P_{j+1}; computed
    // as the recurrence difference so eval and eval_all agree bit for bit).
    auto [p2, dp2] = detail::legendre_pd(j + 2, xi);
    auto [p0, dp0] = detail::legendre_pd(j, xi);
    if (deriv) return scale * (dp2 - dp0);
    return p2 - p0;
  }
  if (zero_left_ || zero_right_) {
    // phi_j = P_{j+1} - P_{j+1}(endpoint); the constant drops from the slope.
    auto [p, dp] = detail::legendre_pd(j + 1, xi);
    if (deriv) return scale * dp;
    return p - (zero_left_ ? neg1_pow(j + 1) : 1.0);
  }
  auto [p, dp] = detail::legendre_pd(j, xi);
  return deriv ? scale * dp : p;
}

void BasisSet::eval_all(double x, std::vector<double>& vals,
                        std::vector<double>& ders) const {
  check_point(x, 0);
  vals.assign(size_, 0.0);
  ders.assign(size_, 0.0);
  if (kind_ == BasisKind::fe_hat) {
    const std::size_t e = element_of(x);
    const double h = nodes_[e + 1] - nodes_[e];
    vals[e] = (nodes_[e + 1] - x) / h;
    ders[e] = -1.0 / h;
    vals[e + 1] = (x - nodes_[e]) / h;
    ders[e + 1] = 1.0 / h;
    return;
  }
  const double t = 2.0 / dom_.length();
  const double xi = (2.0 * x - dom_.a - dom_.b) / dom_.length();
  const std::size_t pmax =
      size_ - 1 +
      (zero_left_ && zero_right_ ? 2 : (zero_left_ || zero_right_ ? 1 : 0));
  std::vector<double> p, dp;
  detail::legendre_upto(pmax, xi, p, dp);
  for (std::size_t j = 0; j < size_; ++j) {
    if (zero_left_ && zero_right_) {
      vals[j] = p[j + 2] - p[j];
      ders[j] = t * (dp[j + 2] - dp[j]);
    } else if (zero_left_ || zero_right_) {
      vals[j] = p[j + 1] - (zero_left_ ? neg1_pow(j + 1) : 1.0);
      ders[j] = t * dp[j + 1];
    } else {
      vals[j] = p[j];
      ders[j] = t * dp[j];
    }
  }
}

double BasisSet::eval_expansion(std::span<const double> coeffs, double x,
                                int deriv) const {
  if (coeffs.size() != size_)
    throw ShapeError("eval_expansion: " + std::to_string(coeffs.size()) +
                     " coefficients for a basis of size " +
                     std::to_string(size_));
  check_point(x, deriv);
  if (kind_ == BasisKind::fe_hat) {
    const std::size_t e = element_of(x);
    const double h = nodes_[e + 1] - nodes_[e];
    if (deriv) return (coeffs[e + 1] - coeffs[e]) / h;
    return (coeffs[e] * (nodes_[e + 1] - x) + coeffs[e + 1] * (x - nodes_[e])) /
           h;
  }

  const double t = 2.0 / dom_.length();
  const double xi = (2.0 * x - dom_.a - dom_.b) / dom_.length();
  const std::size_t pmax =
      size_ - 1 + (zero_left_ && zero_right_ ? 2 : (zero_left_ || zero_right_ ? 1 : 0));
  std::vector<double> p, dp;
  detail::legendre_upto(pmax, xi, p, dp);
  double acc = 0.0;
  for (std::size_t j = 0; j < size_; ++j) {
    double v;
    if (zero_left_ && zero_right_)
      v = deriv ? dp[j + 2] - dp[j] : p[j + 2] - p[j];
    else if (zero_left_ || zero_right_)
      v = deriv ? dp[j + 1]
                : p[j + 1] - (zero_left_ ? neg1_pow(j + 1) : 1.0);
    else
      v = deriv ? dp[j] : p[j];
    acc += coeffs[j] * v;
  }
  return deriv ? t * acc : acc;
}

}  // namespace hadfem
