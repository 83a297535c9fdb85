#pragma once

#include <cstddef>
#include <vector>

namespace dmnls {

/// Nodes and weights for ∫_a^b g(r) dr. Nodes are grouped into fixed-size
/// chunks (one Gauss panel each) that the nonlinearity evaluates as units of
/// parallel work.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t chunk_size = 1;

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t chunk_count() const noexcept {
    return (nodes.size() + chunk_size - 1) / chunk_size;
  }
};

/// M-point Gauss–Legendre rule on [a, b].
QuadratureRule gauss_legendre(std::size_t order, double a, double b);

/// Composite Gauss–Legendre on [a, b] with equal panels no wider than
/// panel_width and nodes_per_panel nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, double panel_width,
                                        std::size_t nodes_per_panel);

}  // namespace dmnls
