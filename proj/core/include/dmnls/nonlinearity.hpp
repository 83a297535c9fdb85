#pragma once

#include <cstddef>
#include <vector>

#include "dmnls/aligned.hpp"
#include "dmnls/field.hpp"
#include "dmnls/quadrature.hpp"

namespace dmnls {

enum class IntervalKind {
  Unit,  ///< r ∈ [0, 1]: the dispersion-managed model itself.
  Line,  ///< r ∈ [-R, R]: truncation of the scaling-invariant whole line.
};

/// Power p, the averaging interval in r, and the r-quadrature used for it.
struct NonlinearitySpec {
  double p = 9.0;
  IntervalKind interval = IntervalKind::Unit;
  /// Gauss–Legendre order on [0, 1].
  std::size_t order = 32;
  /// Line truncation half-width R.
  double half_width = 20.0;
  double panel_width = 0.5;
  std::size_t panel_nodes = 16;
  /// Adds the stationary-phase asymptotics of the |r| > R contributions.
  bool tail_closure = false;

  static NonlinearitySpec unit(double p, std::size_t order = 32);
  static NonlinearitySpec line(double p, double half_width = 20.0, std::size_t panel_nodes = 16);

  /// Throws DomainError: p <= 1, R <= 0, fewer than 4 nodes, panel width <= 0.
  void validate() const;
  QuadratureRule rule() const;
};

/// Evaluates N[f] = ∫ e^{-ir∂x²}(|e^{ir∂x²}f|^{p-1} e^{ir∂x²}f) dr and
/// ∫‖e^{ir∂x²}f‖^{p+1}_{L^{p+1}} dr with a fixed quadrature on a fixed grid.
///
/// Propagator phases are tabulated per node on construction (up to a 256 MiB
/// table), so reuse one instance for repeated evaluation. Work is
/// split across quadrature panels and reduced in panel order; results are
/// bit-identical for any worker count.
///
/// Samples with |e^{ir∂x²}f| > 1e30 raise BlowupSuspected; non-finite
/// intermediate values raise NumericalError.
class AveragedNonlinearity {
 public:
  AveragedNonlinearity(GridPtr grid, NonlinearitySpec spec);

  struct Evaluation {
    Field value;        ///< N[f], Fourier representation.
    double integral;    ///< ∫‖e^{ir∂x²}f‖^{p+1}_{p+1} dr.
  };

  Evaluation evaluate(const Field& f) const;
  Field apply(const Field& f) const { return evaluate(f).value; }
  double strichartz(const Field& f) const;
  /// Per-node values ‖e^{ir_m∂x²}f‖^{p+1}_{p+1}, in node order.
  std::vector<double> integrand(const Field& f) const;

  const NonlinearitySpec& spec() const noexcept { return spec_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

 private:
  Evaluation run(const Field& f, bool want_field) const;

  GridPtr grid_;
  NonlinearitySpec spec_;
  QuadratureRule rule_;
  std::vector<double> k2_;
  ComplexVector phases_;  ///< e^{-ir_m k²}, node-major; empty when too large.
};

/// Overflow guard on |e^{ir∂x²}f|.
inline constexpr double kAmplitudeOverflow = 1e30;

Field averaged_nonlinearity(const Field& f, const NonlinearitySpec& spec);
double strichartz_integral(const Field& f, const NonlinearitySpec& spec);

/// E[f] = ½‖∂x f‖² - 1/(p+1) ∫_0^1 ‖e^{ir∂x²}f‖^{p+1}_{p+1} dr.
double energy(const Field& f, double p, std::size_t order = 32);

/// E_∞[f] with the line-interval integral of `line`.
double energy_infinity(const Field& f, const NonlinearitySpec& line);

/// W_p(f) = ∫‖e^{ir∂x²}f‖^{p+1} dr / (‖f‖^{(p+7)/2} ‖∂x f‖^{(p-5)/2}) over
/// the interval of `spec`. Throws DomainError for a zero or constant field.
double weinstein(const Field& f, const NonlinearitySpec& spec);

/// Outcome of growing the line truncation for a given profile.
struct TruncationChoice {
  double half_width = 0.0;
  double integral = 0.0;
  /// Share of the running total carried by the outermost panel pair.
  double outer_fraction = 0.0;
  bool capped = false;
};

/// Extends R from spec.half_width in steps of `step` until the outermost
/// panel pair contributes less than `tolerance` of the total, or R reaches
/// `max_half_width` (capped = true).
TruncationChoice select_truncation(const Field& f, NonlinearitySpec spec, double tolerance,
                                   double max_half_width, double step = 5.0);

}  // namespace dmnls
