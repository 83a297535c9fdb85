#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "dmnls/field.hpp"

namespace dmnls {

/// In-place complex FFT of a fixed length. Plans are created once per
/// length and shared; execution is safe from concurrent threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<Complex> data) const;
  /// Unnormalized inverse.
  void backward(std::span<Complex> data) const;

 private:
  void execute(void* plan, std::span<Complex> data) const;

  std::size_t n_;
  void* forward_;
  void* backward_;
  int alignment_;
};

/// Process-wide plan cache keyed by length.
const FftPlan& fft_plan(std::size_t n);

/// e^{ir∂x²} f: Fourier coefficients multiplied by e^{-irk²}. The result has
/// the same representation as the input.
Field propagate(const Field& f, double r);

/// ‖f‖²_{L²} = dx Σ|u_j|².
double mass(const Field& f);

/// ‖∂x f‖²_{L²} computed spectrally.
double grad_norm_sq(const Field& f);

/// (dx Σ|u_j|^q)^{1/q}; requires q >= 1.
double lp_norm(const Field& f, double q);

/// ∫ f ḡ dx on the grid.
Complex inner_product(const Field& f, const Field& g);

/// Spectral ∂x f (Nyquist mode zeroed), physical space.
Field derivative(const Field& f);

/// ‖f‖²_{H¹} = mass + grad_norm_sq.
double h1_norm_sq(const Field& f);

/// Fraction of the mass held where |x| >= 0.4 L (the outer tenth of the box
/// at each end). Zero for the zero field.
double boundary_mass_fraction(const Field& f);

/// Periodization-safety threshold on boundary_mass_fraction.
inline constexpr double kBoundaryMassLimit = 1e-10;

}  // namespace dmnls
