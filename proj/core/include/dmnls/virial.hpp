#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmnls/evolution.hpp"
#include "dmnls/field.hpp"
#include "dmnls/ground_state.hpp"

namespace dmnls {

/// V = ∫ x² |u|² dx with x centered on the box. Throws DomainError when more
/// than half of V comes from the outer tenth of the box (wrap-around).
double variance(const Field& u);

/// V₁' = 4 Im ∫ x ∂x u ū dx.
double v1_prime(const Field& u);

/// Φ = 16 E0 - 4(p-9)/(p+1) ∫_0^1 ‖e^{ir∂x²}u‖^{p+1}_{p+1} dr.
double phi(const Field& u, double p, double initial_energy, std::size_t order = 32);

/// Negative root of V0 + V1p0 t - c t²; nullopt unless c > 0. Throws
/// DomainError for V0 < 0.
std::optional<double> predicted_blowup_time(double v0, double v1p0, double c);

/// Quadratic variance bound coefficient c = δ (p-9) x₁² / M[u0]^α with
/// δ = 1 - E[u0]M[u0]^α / (E_∞[Q]M[Q]^α). Returns ≤ 0 when the energy
/// condition fails.
double quadratic_bound_coefficient(double initial_energy, double initial_mass,
                                   const Thresholds& thresholds);

struct VirialPoint {
  double t;
  double variance;
  double v1_prime;
  double phi;
};

struct VirialTrace {
  std::vector<VirialPoint> points;
  double spacing = 0.0;
  double v0 = 0.0;
  double v1p0 = 0.0;
  double c = 0.0;
  std::optional<double> predicted_time;
  /// Every sample stayed clear of the box boundary.
  bool trusted = true;
  /// Samples off the uniform stride (early termination) were dropped.
  std::size_t dropped_terminal = 0;
};

/// Uniform-stride samples of a trajectory. With thresholds, c is filled and
/// the predicted time is set when the initial gradient-mass product lies
/// above its threshold and c > 0.
VirialTrace virial_trace(const Trajectory& traj, const Thresholds* thresholds = nullptr,
                         double initial_mass = 0.0, double initial_energy = 0.0);

struct InequalityCheck {
  std::size_t checked = 0;
  std::size_t satisfied = 0;
  double worst_excess = 0.0;
  double tolerance = 0.0;
  double fraction() const { return checked == 0 ? 1.0 : double(satisfied) / double(checked); }
};

/// Centered second difference of V₁' against Φ at interior samples.
InequalityCheck check_virial_inequality(const VirialTrace& trace, double tolerance);

/// V(t) ≤ V(0) + V₁'(0) t + ∫_0^t∫_0^s Φ, trapezoid double integral, at
/// samples with t ≤ 0.
InequalityCheck check_variance_bound(const VirialTrace& trace, double tolerance);

/// Centered first difference of V against V₁' (V₂' > 0) at interior t < 0.
InequalityCheck check_variance_growth(const VirialTrace& trace, double tolerance);

/// 10 · max(h², dx²) · scale, with scale the largest |Φ| or |V₁'| seen.
double virial_tolerance(const VirialTrace& trace, double dx);

void write_virial_csv(const std::filesystem::path& path, const VirialTrace& trace);
std::string virial_summary_json(const VirialTrace& trace);

}  // namespace dmnls
