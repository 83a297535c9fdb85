#include "dmnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "dmnls/errors.hpp"
#include "dmnls/spectral.hpp"
#include "dmnls/virial.hpp"

namespace dmnls {
namespace {

constexpr Complex kI{0.0, 1.0};

Field rhs(const Field& v, const AveragedNonlinearity* op) {
  if (op == nullptr) return Field(v.grid_ptr(), Representation::Fourier);
  Field out = op->apply(v);
  out *= kI;
  return out;
}

Field axpy(const Field& x, double a, const Field& y) {
  Field out = x;
  auto o = out.values();
  const auto yv = y.values();
  for (std::size_t j = 0; j < o.size(); ++j) o[j] += a * yv[j];
  return out;
}

Field step(const Field& u, double h, const AveragedNonlinearity* op) {
  const Field u0 = u.to_fourier();
  const double half = 0.5 * h;
  const Field ui = propagate(u0, half);
  const Field k1 = propagate(rhs(u0, op), half);
  const Field k2 = rhs(axpy(ui, half, k1), op);
  const Field k3 = rhs(axpy(ui, half, k2), op);
  const Field k4 = rhs(propagate(axpy(ui, h, k3), half), op);
  Field mid = ui;
  auto m = mid.values();
  const auto a = k1.values();
  const auto b = k2.values();
  const auto c = k3.values();
  for (std::size_t j = 0; j < m.size(); ++j) m[j] += (h / 6.0) * (a[j] + 2.0 * b[j] + 2.0 * c[j]);
  return axpy(propagate(mid, half), h / 6.0, k4);
}

double max_amplitude(const Field& u) {
  const Field x = u.to_physical();
  double best = 0.0;
  for (const auto& v : x.values()) best = std::max(best, std::abs(v));
  return best;
}

double relative_drift(double value, double reference) {
  const double d = std::abs(value - reference);
  return reference != 0.0 ? d / std::abs(reference) : d;
}

}  // namespace

void EvolveConfig::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("evolve: p must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (!(t_end != 0.0) || !std::isfinite(t_end)) throw DomainError("evolve: t_end must be nonzero");
  if (order < 4) throw DomainError("evolve: quadrature order must be >= 4");
  if (stride == 0) throw DomainError("evolve: stride must be >= 1");
  if (!(growth_factor > 1.0)) throw DomainError("evolve: growth factor must exceed 1");
  if (!(amplitude_cap > 0.0)) throw DomainError("evolve: amplitude cap must be positive");
  if (!(min_dt > 0.0) || !(min_dt <= dt)) throw DomainError("evolve: need 0 < min_dt <= dt");
  if (!(max_gradient_change > 0.0)) throw DomainError("evolve: gradient change limit must be positive");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowupSuspected: return "blowup_suspected";
    case RunStatus::Aborted: return "aborted";
  }
  return "unknown";
}

Field rk4_step(const Field& u, double dt, const AveragedNonlinearity& nonlinearity) {
  if (!(u.grid() == *nonlinearity.grid_ptr())) throw DomainError("rk4_step: grid mismatch");
  Field out = step(u, dt, &nonlinearity);
  out.transform_to(u.representation());
  return out;
}

Field rk4_step(const Field& u, double dt, double p, std::size_t order) {
  return rk4_step(u, dt, AveragedNonlinearity(u.grid_ptr(), NonlinearitySpec::unit(p, order)));
}

Trajectory evolve(const Field& u0, const EvolveConfig& cfg) {
  cfg.validate();
  if (!u0.is_finite()) throw DomainError("evolve: initial data not finite");
  const AveragedNonlinearity op(u0.grid_ptr(), NonlinearitySpec::unit(cfg.p, cfg.order));
  const AveragedNonlinearity* nl = cfg.nonlinear ? &op : nullptr;
  const double p = cfg.p;

  const auto base_steps = static_cast<std::size_t>(std::ceil(std::abs(cfg.t_end) / cfg.dt - 1e-9));
  const double dt_base = cfg.t_end / static_cast<double>(base_steps);

  Trajectory traj{{}, {}, RunStatus::Completed, {}, 0.0, 0.0, 0.0, 0, 0, u0.to_fourier(), p};
  traj.sample_spacing = std::abs(dt_base) * static_cast<double>(cfg.stride);

  Field u = u0.to_fourier();
  const double s0 = nl ? op.strichartz(u) : 0.0;
  const double g0 = grad_norm_sq(u);
  traj.initial_energy = 0.5 * g0 - s0 / (p + 1.0);

  auto sample = [&](const Field& state, double t, double h, bool terminal) {
    Sample s;
    s.t = t;
    s.dt = h;
    s.terminal = terminal;
    s.mass = mass(state);
    s.grad_sq = grad_norm_sq(state);
    s.strichartz = nl ? op.strichartz(state) : 0.0;
    s.energy = 0.5 * s.grad_sq - s.strichartz / (p + 1.0);
    s.phi = 16.0 * traj.initial_energy - 4.0 * (p - 9.0) / (p + 1.0) * s.strichartz;
    try {
      s.variance = variance(state);
      s.v1_prime = v1_prime(state);
    } catch (const DomainError&) {
      s.variance = std::numeric_limits<double>::quiet_NaN();
      s.v1_prime = std::numeric_limits<double>::quiet_NaN();
    }
    s.max_amplitude = max_amplitude(state);
    s.boundary_fraction = boundary_mass_fraction(state);
    traj.samples.push_back(s);
    if (!terminal && cfg.snapshot_stride > 0 &&
        (traj.samples.size() - 1) % cfg.snapshot_stride == 0) {
      traj.snapshots.emplace_back(t, state.to_physical());
    }
  };

  sample(u, 0.0, dt_base, false);
  double grad = g0;
  unsigned level = 0;
  std::size_t base = 0;
  std::uint64_t sub = 0;
  double time = 0.0;

  auto finish = [&](RunStatus status, std::string reason) {
    traj.status = status;
    traj.reason = std::move(reason);
    traj.end_time = time;
    if (traj.samples.empty() || traj.samples.back().t != time) {
      try {
        sample(u, time, dt_base / std::ldexp(1.0, static_cast<int>(level)), true);
      } catch (const std::exception&) {
      }
    } else {
      traj.samples.back().terminal = traj.samples.back().terminal || status != RunStatus::Completed;
    }
    traj.final_state = u;
    return traj;
  };

  while (base < base_steps) {
    const double h = dt_base / std::ldexp(1.0, static_cast<int>(level));
    if (std::abs(h) < cfg.min_dt) return finish(RunStatus::BlowupSuspected, "step size fell below min_dt");
    Field next(u.grid_ptr());
    bool rejected = false;
    try {
      next = step(u, h, nl);
      rejected = !next.is_finite();
    } catch (const NumericalError&) {
      rejected = true;
    } catch (const DomainError&) {
      rejected = true;
    }
    const double g_next = rejected ? 0.0 : grad_norm_sq(next);
    if (!rejected) {
      const double change = grad > 0.0 ? std::abs(g_next - grad) / grad : 0.0;
      rejected = !std::isfinite(g_next) || !(change <= cfg.max_gradient_change);
    }
    if (rejected) {
      ++level;
      sub *= 2;
      ++traj.rejected_steps;
      continue;
    }
    u = std::move(next);
    grad = g_next;
    ++traj.steps;
    if (++sub == (std::uint64_t{1} << level)) {
      sub = 0;
      ++base;
      time = dt_base * static_cast<double>(base);
    } else {
      time = dt_base * (static_cast<double>(base) + std::ldexp(static_cast<double>(sub), -static_cast<int>(level)));
    }
    if (g0 > 0.0 && grad > cfg.growth_factor * g0) {
      return finish(RunStatus::BlowupSuspected, "gradient norm exceeded growth factor");
    }
    if (max_amplitude(u) > cfg.amplitude_cap) {
      return finish(RunStatus::BlowupSuspected, "amplitude exceeded cap");
    }
    if (sub == 0 && base % cfg.stride == 0) {
      try {
        sample(u, time, h, false);
      } catch (const BlowupSuspected& e) {
        return finish(RunStatus::BlowupSuspected, e.what());
      } catch (const NumericalError& e) {
        return finish(RunStatus::Aborted, e.what());
      }
      const Sample& s = traj.samples.back();
      if (!std::isfinite(s.energy) || !std::isfinite(s.mass)) {
        traj.samples.pop_back();
        return finish(RunStatus::Aborted, "non-finite diagnostics");
      }
    }
  }
  return finish(RunStatus::Completed, "");
}

ConservationReport conservation_report(const Trajectory& traj) {
  ConservationReport r;
  if (traj.samples.empty()) return r;
  const Sample& first = traj.samples.front();
  for (const Sample& s : traj.samples) {
    r.mass_drift = std::max(r.mass_drift, relative_drift(s.mass, first.mass));
    r.energy_drift = std::max(r.energy_drift, relative_drift(s.energy, first.energy));
  }
  return r;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out.precision(17);
  out << "t,mass,energy,grad_sq,variance,v1prime,phi\n";
  for (const Sample& s : traj.samples) {
    out << s.t << ',' << s.mass << ',' << s.energy << ',' << s.grad_sq << ',' << s.variance << ','
        << s.v1_prime << ',' << s.phi << '\n';
  }
}

}  // namespace dmnls
