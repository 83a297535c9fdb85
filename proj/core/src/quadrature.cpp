#include "dmnls/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "dmnls/errors.hpp"

namespace dmnls {
namespace {

using Reference = std::pair<std::vector<double>, std::vector<double>>;

// Nodes and weights on [-1, 1], ascending.
const Reference& reference_rule(std::size_t order) {
  static std::mutex m;
  static std::map<std::size_t, Reference> cache;
  std::lock_guard lock(m);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  const int n = static_cast<int>(order);
  // Non-negative zeros in ascending order (zero itself included for odd n).
  const auto positive = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> nodes;
  nodes.reserve(order);
  for (auto r = positive.rbegin(); r != positive.rend(); ++r) {
    if (*r != 0.0) nodes.push_back(-*r);
  }
  for (double z : positive) nodes.push_back(z);

  std::vector<double> weights(order);
  for (std::size_t i = 0; i < order; ++i) {
    const double x = nodes[i];
    const double dp = boost::math::legendre_p_prime(n, x);
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Enforce exact mirror symmetry so ±r nodes pair up bit-for-bit.
  for (std::size_t i = 0; i < order / 2; ++i) {
    const std::size_t j = order - 1 - i;
    const double x = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = weights[j] = w;
  }
  return cache.emplace(order, Reference{std::move(nodes), std::move(weights)}).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t order, double a, double b) {
  if (order < 1) throw DomainError("quadrature order must be positive");
  if (!(b > a)) throw DomainError("quadrature interval must satisfy a < b");
  const auto& [x, w] = reference_rule(order);
  QuadratureRule rule;
  rule.lower = a;
  rule.upper = b;
  rule.chunk_size = std::min<std::size_t>(order, 8);
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < order; ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, double panel_width,
                                        std::size_t nodes_per_panel) {
  if (!(panel_width > 0.0)) throw DomainError("panel width must be positive");
  if (!(b > a)) throw DomainError("quadrature interval must satisfy a < b");
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / panel_width - 1e-12));
  const double h = (b - a) / static_cast<double>(panels);
  const auto& [x, w] = reference_rule(nodes_per_panel);
  QuadratureRule rule;
  rule.lower = a;
  rule.upper = b;
  rule.chunk_size = nodes_per_panel;
  rule.nodes.reserve(panels * nodes_per_panel);
  rule.weights.reserve(panels * nodes_per_panel);
  for (std::size_t p = 0; p < panels; ++p) {
    // Panels are laid out from both ends toward the middle so the node set
    // is exactly symmetric for symmetric intervals.
    const double left = p < panels / 2 ? a + h * static_cast<double>(p)
                                        : b - h * static_cast<double>(panels - p);
    const double mid = left + 0.5 * h;
    for (std::size_t i = 0; i < nodes_per_panel; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * x[i]);
      rule.weights.push_back(0.5 * h * w[i]);
    }
  }
  return rule;
}

}  // namespace dmnls
