#pragma once

#include <functional>
#include <span>

#include "dmnls/aligned.hpp"
#include "dmnls/grid.hpp"

namespace dmnls {

enum class Representation { Physical, Fourier };

/// Complex samples of a function on a Grid1D.
///
/// Fourier-space values hold the unnormalized forward DFT
/// û_k = Σ_j u_j e^{-2πi jk/n}; the inverse carries the 1/n.
class Field {
 public:
  Field(GridPtr grid, Representation rep = Representation::Physical);
  Field(GridPtr grid, ComplexVector values, Representation rep = Representation::Physical);

  /// Samples f(x_j) on the grid coordinates.
  static Field sample(GridPtr grid, const std::function<Complex(double)>& f);

  const Grid1D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  Representation representation() const noexcept { return rep_; }

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t j) { return values_[j]; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }

  Field to_fourier() const;
  Field to_physical() const;
  void transform_to(Representation rep);

  bool is_finite() const noexcept;

  Field& operator*=(Complex s);
  /// Both operands are brought to this field's representation.
  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);

 private:
  GridPtr grid_;
  ComplexVector values_;
  Representation rep_;
};

Field operator*(Complex s, Field f);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);

/// Complex conjugate, returned in physical space.
Field conj(const Field& f);

/// Throws DomainError when the grids differ.
void require_same_grid(const Field& a, const Field& b);

}  // namespace dmnls
