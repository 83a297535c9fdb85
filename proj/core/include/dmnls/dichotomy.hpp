#pragma once

#include <string>

#include "dmnls/field.hpp"
#include "dmnls/ground_state.hpp"

namespace dmnls {

enum class Verdict { Global, BlowupNegativeTime, Indeterminate };
std::string to_string(Verdict v);

/// Relative guard band around every threshold comparison.
inline constexpr double kThresholdGuard = 1e-6;

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  double p = 0.0;
  double alpha = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  /// E[u0] M[u0]^α and ‖∂x u0‖ ‖u0‖^α (supercritical case).
  double energy_mass = 0.0;
  double grad_mass = 0.0;
  double energy_mass_threshold = 0.0;
  double grad_mass_threshold = 0.0;
  /// Mass of Q (critical case).
  double mass_threshold = 0.0;
  /// (threshold - value) / |threshold|; positive means below.
  double energy_margin = 0.0;
  double grad_margin = 0.0;
  double mass_margin = 0.0;
  bool finite_variance = true;
  std::string notes;
};

/// Supercritical dichotomy (p > 9) against thresholds of an accepted
/// ground state. Throws DomainError for p <= 9 or thresholds of another p.
Classification classify(const Field& u0, double p, const Thresholds& thresholds,
                        std::size_t order = 32);

/// Mass-critical criterion at p = 9. Throws DomainError when gs.p != 9.
Classification classify_critical(const Field& u0, const GroundState& gs, std::size_t order = 32);

std::string classification_json(const Classification& c);

}  // namespace dmnls
