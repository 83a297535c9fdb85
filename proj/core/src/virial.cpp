#include "dmnls/virial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dmnls/errors.hpp"
#include "dmnls/spectral.hpp"
#include "json.hpp"

namespace dmnls {
namespace {

void check_wraparound(const Field& u) {
  const Field v = u.to_physical();
  const auto x = v.grid().coordinates();
  const double edge = 0.4 * v.grid().length();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double w = x[j] * x[j] * std::norm(v[j]);
    total += w;
    if (std::abs(x[j]) >= edge) outer += w;
  }
  if (total > 0.0 && outer > 0.5 * total) {
    throw DomainError("variance dominated by mass near the box boundary");
  }
}

}  // namespace

double variance(const Field& u) {
  check_wraparound(u);
  const Field v = u.to_physical();
  const auto x = v.grid().coordinates();
  double total = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) total += x[j] * x[j] * std::norm(v[j]);
  return v.grid().dx() * total;
}

double v1_prime(const Field& u) {
  check_wraparound(u);
  const Field v = u.to_physical();
  const Field du = derivative(v).to_physical();
  const auto x = v.grid().coordinates();
  double im = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) im += x[j] * (du[j] * std::conj(v[j])).imag();
  return 4.0 * v.grid().dx() * im;
}

double phi(const Field& u, double p, double initial_energy, std::size_t order) {
  if (p == 9.0) return 16.0 * initial_energy;
  const double s = strichartz_integral(u, NonlinearitySpec::unit(p, order));
  return 16.0 * initial_energy - 4.0 * (p - 9.0) / (p + 1.0) * s;
}

std::optional<double> predicted_blowup_time(double v0, double v1p0, double c) {
  if (!(v0 >= 0.0)) throw DomainError("variance must be nonnegative");
  if (!(c > 0.0)) return std::nullopt;
  const double root = std::sqrt(v1p0 * v1p0 + 4.0 * c * v0);
  if (v1p0 > 0.0) return -2.0 * v0 / (v1p0 + root);
  return (v1p0 - root) / (2.0 * c);
}

double quadratic_bound_coefficient(double initial_energy, double initial_mass,
                                   const Thresholds& thresholds) {
  if (!(initial_mass > 0.0)) return 0.0;
  const double m_alpha = std::pow(initial_mass, thresholds.alpha);
  const double delta = 1.0 - initial_energy * m_alpha / thresholds.energy_mass_threshold;
  return delta * (thresholds.p - 9.0) * thresholds.grad_mass_threshold *
         thresholds.grad_mass_threshold / m_alpha;
}

VirialTrace virial_trace(const Trajectory& traj, const Thresholds* thresholds, double initial_mass,
                         double initial_energy) {
  VirialTrace trace;
  trace.spacing = traj.sample_spacing;
  for (const Sample& s : traj.samples) {
    if (s.terminal) {
      ++trace.dropped_terminal;
      continue;
    }
    if (!std::isfinite(s.variance) || s.boundary_fraction >= kBoundaryMassLimit) {
      trace.trusted = false;
    }
    trace.points.push_back({s.t, s.variance, s.v1_prime, s.phi});
  }
  if (trace.points.empty()) return trace;
  trace.v0 = trace.points.front().variance;
  trace.v1p0 = trace.points.front().v1_prime;
  if (thresholds != nullptr) {
    trace.c = quadratic_bound_coefficient(initial_energy, initial_mass, *thresholds);
    const Sample& first = traj.samples.front();
    const double grad_mass =
        std::sqrt(first.grad_sq) * std::pow(initial_mass, 0.5 * thresholds->alpha);
    if (std::isfinite(trace.v0) && grad_mass > thresholds->grad_mass_threshold) {
      trace.predicted_time = predicted_blowup_time(trace.v0, trace.v1p0, trace.c);
    }
  }
  return trace;
}

InequalityCheck check_virial_inequality(const VirialTrace& trace, double tolerance) {
  InequalityCheck r;
  r.tolerance = tolerance;
  const auto& pts = trace.points;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double second = (pts[i + 1].v1_prime - pts[i - 1].v1_prime) / (pts[i + 1].t - pts[i - 1].t);
    const double excess = second - pts[i].phi;
    ++r.checked;
    if (excess <= tolerance) ++r.satisfied;
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  return r;
}

InequalityCheck check_variance_bound(const VirialTrace& trace, double tolerance) {
  InequalityCheck r;
  r.tolerance = tolerance;
  const auto& pts = trace.points;
  if (pts.empty()) return r;
  double inner = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      const double h = pts[i].t - pts[i - 1].t;
      const double prev_inner = inner;
      inner += 0.5 * h * (pts[i].phi + pts[i - 1].phi);
      outer += 0.5 * h * (inner + prev_inner);
    }
    if (pts[i].t > 0.0) continue;
    const double bound = trace.v0 + trace.v1p0 * pts[i].t + outer;
    const double excess = pts[i].variance - bound;
    ++r.checked;
    if (excess <= tolerance) ++r.satisfied;
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  return r;
}

InequalityCheck check_variance_growth(const VirialTrace& trace, double tolerance) {
  InequalityCheck r;
  r.tolerance = tolerance;
  const auto& pts = trace.points;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (pts[i].t >= 0.0) continue;
    const double slope = (pts[i + 1].variance - pts[i - 1].variance) / (pts[i + 1].t - pts[i - 1].t);
    const double excess = pts[i].v1_prime - slope;
    ++r.checked;
    if (excess <= tolerance) ++r.satisfied;
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  return r;
}

double virial_tolerance(const VirialTrace& trace, double dx) {
  double scale = 0.0;
  for (const auto& pt : trace.points) {
    scale = std::max({scale, std::abs(pt.phi), std::abs(pt.v1_prime)});
  }
  const double h = trace.spacing;
  return 10.0 * std::max(h * h, dx * dx) * scale;
}

void write_virial_csv(const std::filesystem::path& path, const VirialTrace& trace) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out.precision(17);
  out << "t,V,V1prime,Phi\n";
  for (const auto& pt : trace.points) {
    out << pt.t << ',' << pt.variance << ',' << pt.v1_prime << ',' << pt.phi << '\n';
  }
}

std::string virial_summary_json(const VirialTrace& trace) {
  nlohmann::json j;
  j["samples"] = trace.points.size();
  j["spacing"] = trace.spacing;
  j["V0"] = trace.v0;
  j["V1prime0"] = trace.v1p0;
  j["c"] = trace.c;
  j["coefficients"] = {trace.v0, trace.v1p0, -trace.c};
  j["predicted_time"] = trace.predicted_time ? nlohmann::json(*trace.predicted_time) : nlohmann::json();
  j["trusted"] = trace.trusted;
  j["dropped_terminal"] = trace.dropped_terminal;
  return j.dump(2);
}

}  // namespace dmnls
