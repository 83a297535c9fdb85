#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dmnls {

/// Uniform periodic grid on [-L/2, L/2) with its FFT dual lattice.
///
/// Wavenumbers follow the standard FFT ordering
/// 2π/L · {0, 1, ..., n/2-1, -n/2, ..., -1}; coordinates are centered so
/// that x = 0 sits at index n/2 and the reflection x -> -x maps index j to
/// (n - j) mod n.
class Grid1D {
 public:
  Grid1D(std::size_t n, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  /// Lattice spacing 2π/L.
  double dk() const noexcept;

  std::span<const double> wavenumbers() const noexcept { return k_; }
  std::span<const double> coordinates() const noexcept { return x_; }

  bool operator==(const Grid1D& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  std::size_t n_;
  double length_;
  double dx_;
  std::vector<double> k_;
  std::vector<double> x_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Throws DomainError unless n >= 8 is a power of two and length > 0.
GridPtr make_grid(std::size_t n, double length);

}  // namespace dmnls
