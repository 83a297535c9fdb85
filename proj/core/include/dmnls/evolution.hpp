#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "dmnls/field.hpp"
#include "dmnls/nonlinearity.hpp"

namespace dmnls {

struct EvolveConfig {
  double p = 9.0;
  double dt = 1e-3;
  /// Signed horizon; negative integrates backward.
  double t_end = -1.0;
  std::size_t order = 32;
  /// Diagnostics every `stride` base steps.
  std::size_t stride = 10;
  /// Keep a snapshot every `snapshot_stride` samples; 0 keeps none.
  std::size_t snapshot_stride = 0;
  double growth_factor = 1e3;
  double amplitude_cap = 1e6;
  double min_dt = 1e-9;
  /// Largest accepted per-step relative change of ‖∂x u‖².
  double max_gradient_change = 0.1;
  /// Drop the nonlinear term (pure linear flow).
  bool nonlinear = true;

  void validate() const;
};

enum class RunStatus { Completed, BlowupSuspected, Aborted };
std::string to_string(RunStatus s);

struct Sample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_sq = 0.0;
  double variance = 0.0;
  double v1_prime = 0.0;
  double phi = 0.0;
  double strichartz = 0.0;
  double max_amplitude = 0.0;
  double boundary_fraction = 0.0;
  double dt = 0.0;
  /// Sample taken at early termination, off the uniform stride.
  bool terminal = false;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<std::pair<double, Field>> snapshots;
  RunStatus status = RunStatus::Completed;
  std::string reason;
  double end_time = 0.0;
  double initial_energy = 0.0;
  /// Uniform diagnostic spacing |stride · dt|.
  double sample_spacing = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  /// Last finite state reached.
  Field final_state;
  double p = 0.0;
};

/// One interaction-picture RK4 step of i u_t + u_xx + N[u] = 0 with the
/// nonlinearity averaged over r ∈ [0, 1]. The linear flow is exact; dt may be
/// negative. BlowupSuspected propagates from the nonlinearity.
Field rk4_step(const Field& u, double dt, const AveragedNonlinearity& nonlinearity);
Field rk4_step(const Field& u, double dt, double p, std::size_t order = 32);

/// Integrates toward config.t_end. The step halves permanently whenever a
/// trial step moves ‖∂x u‖² by more than config.max_gradient_change, overflows
/// or turns non-finite. Runs end as BlowupSuspected when ‖∂x u‖² exceeds
/// growth_factor times its initial value, max|u| exceeds amplitude_cap, or
/// the step falls below min_dt; as Aborted when an accepted state yields
/// non-finite diagnostics.
Trajectory evolve(const Field& u0, const EvolveConfig& config);

struct ConservationReport {
  double mass_drift = 0.0;
  double energy_drift = 0.0;
};

/// Max relative drift over the samples (absolute when the initial value is 0).
ConservationReport conservation_report(const Trajectory& traj);

/// CSV header t,mass,energy,grad_sq,variance,v1prime,phi.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace dmnls
