#include "dmnls/dichotomy.hpp"

#include <cmath>

#include "dmnls/errors.hpp"
#include "dmnls/nonlinearity.hpp"
#include "dmnls/spectral.hpp"
#include "json.hpp"

namespace dmnls {
namespace {

double margin(double threshold, double value) {
  return (threshold - value) / std::abs(threshold);
}

struct Functionals {
  double mass;
  double grad_sq;
  double energy;
};

Functionals evaluate(const Field& u0, double p, std::size_t order) {
  if (!u0.is_finite()) throw DomainError("classify: initial data not finite");
  const double m = mass(u0);
  const double g = grad_norm_sq(u0);
  const double s = strichartz_integral(u0, NonlinearitySpec::unit(p, order));
  return {m, g, 0.5 * g - s / (p + 1.0)};
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Global: return "Global";
    case Verdict::BlowupNegativeTime: return "BlowupNegativeTime";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

Classification classify(const Field& u0, double p, const Thresholds& thresholds, std::size_t order) {
  if (!(p > 9.0)) throw DomainError("classify requires p > 9; use classify_critical at p = 9");
  if (thresholds.p != p) throw DomainError("classify: thresholds belong to a different p");
  if (!(thresholds.grad_mass_threshold > 0.0) || !(thresholds.energy_mass_threshold > 0.0)) {
    throw DomainError("classify: thresholds missing");
  }
  const Functionals f = evaluate(u0, p, order);
  Classification c;
  c.p = p;
  c.alpha = thresholds.alpha;
  c.mass = f.mass;
  c.energy = f.energy;
  c.grad_norm = std::sqrt(f.grad_sq);
  c.energy_mass = f.energy * std::pow(f.mass, c.alpha);
  c.grad_mass = c.grad_norm * std::pow(f.mass, 0.5 * c.alpha);
  c.energy_mass_threshold = thresholds.energy_mass_threshold;
  c.grad_mass_threshold = thresholds.grad_mass_threshold;
  c.energy_margin = margin(c.energy_mass_threshold, c.energy_mass);
  c.grad_margin = margin(c.grad_mass_threshold, c.grad_mass);
  c.finite_variance = boundary_mass_fraction(u0) < kBoundaryMassLimit;

  const bool below_energy = c.energy_margin > kThresholdGuard;
  if (below_energy && c.grad_margin > kThresholdGuard) {
    c.verdict = Verdict::Global;
  } else if (below_energy && c.grad_margin < -kThresholdGuard && c.finite_variance) {
    c.verdict = Verdict::BlowupNegativeTime;
  } else {
    c.verdict = Verdict::Indeterminate;
  }
  if (!below_energy) {
    c.notes = "energy-mass product not below threshold";
  } else if (std::abs(c.grad_margin) <= kThresholdGuard) {
    c.notes = "gradient-mass product inside the guard band";
  } else if (c.grad_margin < 0.0 && !c.finite_variance) {
    c.notes = "finite variance not established: boundary mass above limit";
  } else {
    c.notes = "finite variance assumed from boundary-mass diagnostic";
  }
  return c;
}

Classification classify_critical(const Field& u0, const GroundState& gs, std::size_t order) {
  if (gs.p != 9.0) throw DomainError("classify_critical requires a p = 9 ground state");
  const Functionals f = evaluate(u0, 9.0, order);
  Classification c;
  c.p = 9.0;
  c.mass = f.mass;
  c.energy = f.energy;
  c.grad_norm = std::sqrt(f.grad_sq);
  c.mass_threshold = gs.mass_Q;
  c.mass_margin = margin(gs.mass_Q, f.mass);
  c.energy_margin = f.grad_sq > 0.0 ? -f.energy / (0.5 * f.grad_sq) : 0.0;
  c.finite_variance = boundary_mass_fraction(u0) < kBoundaryMassLimit;
  if (c.mass_margin > kThresholdGuard) {
    c.verdict = Verdict::Global;
    c.notes = "mass below mass of Q";
  } else if (c.mass_margin < -kThresholdGuard && c.energy_margin > kThresholdGuard &&
             c.finite_variance) {
    c.verdict = Verdict::BlowupNegativeTime;
    c.notes = "mass above mass of Q with negative energy; finite variance assumed from "
              "boundary-mass diagnostic";
  } else {
    c.verdict = Verdict::Indeterminate;
    if (std::abs(c.mass_margin) <= kThresholdGuard) {
      c.notes = "mass inside the guard band around mass of Q";
    } else if (!c.finite_variance) {
      c.notes = "finite variance not established: boundary mass above limit";
    } else {
      c.notes = "mass above mass of Q without negative energy";
    }
  }
  return c;
}

std::string classification_json(const Classification& c) {
  nlohmann::json j;
  j["verdict"] = to_string(c.verdict);
  j["p"] = c.p;
  j["mass"] = c.mass;
  j["energy"] = c.energy;
  j["grad_norm"] = c.grad_norm;
  if (c.p > 9.0) {
    j["alpha"] = c.alpha;
    j["energy_mass"] = c.energy_mass;
    j["grad_mass"] = c.grad_mass;
    j["energy_mass_threshold"] = c.energy_mass_threshold;
    j["grad_mass_threshold"] = c.grad_mass_threshold;
    j["margins"] = {{"energy_mass", c.energy_margin}, {"grad_mass", c.grad_margin}};
  } else {
    j["mass_threshold"] = c.mass_threshold;
    j["margins"] = {{"mass", c.mass_margin}, {"negative_energy", c.energy_margin}};
  }
  j["guard"] = kThresholdGuard;
  j["finite_variance"] = c.finite_variance;
  j["notes"] = c.notes;
  return j.dump(2);
}

}  // namespace dmnls
