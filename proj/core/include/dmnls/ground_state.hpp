#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "dmnls/field.hpp"
#include "dmnls/nonlinearity.hpp"

namespace dmnls {

struct GroundStateConfig {
  std::size_t n = 4096;
  double length = 0.0;  ///< 0 selects the default 64π.
  double half_width = 20.0;
  std::size_t panel_nodes = 16;
  double panel_width = 0.5;
  bool tail_closure = true;
  /// Grow R after convergence while the outer panel pair exceeds this share.
  double extension_tol = 1e-10;
  double max_half_width = 20.0;
  double update_tol = 1e-10;
  double residual_tol = 1e-6;
  std::size_t max_iterations = 2000;
  /// Starting profile; the unit Gaussian when empty.
  std::optional<Field> seed;

  double resolved_length() const;
};

/// Converged extremizer Q of the whole-line Weinstein functional.
struct GroundState {
  Field profile;
  double p = 0.0;
  double c_p_estimate = 0.0;
  double mass_Q = 0.0;
  double grad_sq_Q = 0.0;
  double strichartz_Q = 0.0;
  /// ‖-Q'' + Q - N_ℝ[Q]‖ / ‖Q‖.
  double el_residual = 0.0;
  double last_update = 0.0;
  std::size_t iterations = 0;
  NonlinearitySpec line{};
  bool truncation_capped = false;
  double outer_panel_fraction = 0.0;
};

/// Petviashvili iteration for -Q'' + Q = N_ℝ[Q] with stabilizing factor
/// S = ⟨(1-∂x²)Q, Q⟩ / ⟨N[Q], Q⟩ raised to p/(p-1). The iterate is kept real
/// and even. Throws DomainError for p < 9, ConvergenceError when the
/// iteration stalls or collapses, and NumericalError if the resulting
/// constant falls outside analytic_bounds(p).
GroundState petviashvili_solve(double p, const GroundStateConfig& config);

struct Bounds {
  double lower;
  double upper;
};

/// Gaussian trial value (lower) and the Strichartz-based 1/(2√3) (upper).
/// Requires p > 5.
Bounds analytic_bounds(double p);

/// Relative residuals of the three norm identities a maximizer satisfies.
struct NormIdentityReport {
  double mass;        ///< mass_Q against its closed form in C_p.
  double gradient;    ///< grad_sq_Q against (p-5)/(p+7) mass_Q.
  double strichartz;  ///< strichartz_Q against 2(p+1)/(p+7) mass_Q.
  /// (grad_sq_Q + mass_Q - strichartz_Q) / mass_Q.
  double pairing;
  double max_abs() const;
};

NormIdentityReport verify_norm_identities(const GroundState& gs);

/// Dichotomy thresholds; the primary values come from C_p, the
/// `*_from_norms` values from Q's norms directly.
struct Thresholds {
  double p = 0.0;
  double alpha = 0.0;
  double c_p = 0.0;
  double grad_mass_threshold = 0.0;
  double energy_mass_threshold = 0.0;
  double grad_mass_from_norms = 0.0;
  double energy_mass_from_norms = 0.0;
  /// Largest relative disagreement between the two routes.
  double consistency() const;
};

/// Requires p > 9.
Thresholds thresholds_from_constant(double p, double c_p);
Thresholds dichotomy_thresholds(const GroundState& gs);

/// JSON metadata; `snapshot` names the binary profile file next to it.
std::string ground_state_json(const GroundState& gs, const std::string& snapshot);
/// Writes <dir>/groundstate.json and <dir>/groundstate_Q.bin.
std::filesystem::path write_ground_state(const std::filesystem::path& dir, const GroundState& gs);
GroundState read_ground_state(const std::filesystem::path& json_path);

}  // namespace dmnls
