#include "dmnls/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "dmnls/errors.hpp"

namespace dmnls {

Grid1D::Grid1D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
  dx_ = length / static_cast<double>(n);
  k_.resize(n);
  x_.resize(n);
  const double dk = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const long m = static_cast<long>(j) < half ? static_cast<long>(j)
                                                : static_cast<long>(j) - static_cast<long>(n);
    k_[j] = dk * static_cast<double>(m);
    x_[j] = (static_cast<double>(j) - static_cast<double>(half)) * dx_;
  }
}

double Grid1D::dk() const noexcept { return 2.0 * std::numbers::pi / length_; }

GridPtr make_grid(std::size_t n, double length) {
  return std::make_shared<const Grid1D>(n, length);
}

}  // namespace dmnls
