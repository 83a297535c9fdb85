#include "dmnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "dmnls/errors.hpp"
#include "dmnls/profiles.hpp"
#include "dmnls/snapshot.hpp"
#include "dmnls/spectral.hpp"
#include "json.hpp"

namespace dmnls {
namespace {

using nlohmann::json;

double l2_norm(const Field& f) { return std::sqrt(mass(f)); }

// Keeps the real part and the even part about x = 0, which sits at j = n/2.
void symmetrize(Field& f) {
  f.transform_to(Representation::Physical);
  const std::size_t n = f.size();
  auto v = f.values();
  for (auto& z : v) z = Complex(z.real(), 0.0);
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double avg = 0.5 * (v[j].real() + v[n - j].real());
    v[j] = v[n - j] = Complex(avg, 0.0);
  }
}

struct SolveState {
  Field q;
  double update = 1.0;
  double residual = 1.0;
  double strichartz = 0.0;
  std::size_t iterations = 0;
};

SolveState iterate(Field q, const AveragedNonlinearity& op, const GroundStateConfig& cfg,
                   std::size_t budget) {
  const double p = op.spec().p;
  const double gamma = p / (p - 1.0);
  const auto k = q.grid().wavenumbers();
  const std::size_t n = q.size();
  SolveState st{std::move(q)};
  symmetrize(st.q);
  for (std::size_t it = 0;; ++it) {
    const Field qh = st.q.to_fourier();
    auto eval = op.evaluate(qh);
    const auto nh = eval.value.values();
    const auto qv = qh.values();
    Field defect(qh.grid_ptr(), Representation::Fourier);
    auto dv = defect.values();
    for (std::size_t j = 0; j < n; ++j) dv[j] = (1.0 + k[j] * k[j]) * qv[j] - nh[j];
    const double qnorm = l2_norm(qh);
    if (!(qnorm > 0.0) || !std::isfinite(qnorm)) {
      throw ConvergenceError("ground state: iterate collapsed to zero");
    }
    st.residual = l2_norm(defect) / qnorm;
    st.strichartz = eval.integral;
    st.iterations = it;
    if (!std::isfinite(st.residual)) throw ConvergenceError("ground state: non-finite residual");
    if (it > 0 && st.update < cfg.update_tol && st.residual < cfg.residual_tol) return st;
    if (it >= budget) {
      std::ostringstream os;
      os << "ground state: no convergence after " << it << " iterations (update " << st.update
         << ", residual " << st.residual << ")";
      throw ConvergenceError(os.str());
    }

    const double num = mass(qh) + grad_norm_sq(qh);
    const double den = inner_product(eval.value, qh).real();
    if (!(den > 0.0) || !std::isfinite(den)) {
      throw ConvergenceError("ground state: stabilizing factor diverged");
    }
    const double factor = std::pow(num / den, gamma);
    if (!std::isfinite(factor) || factor > 1e12) {
      throw ConvergenceError("ground state: stabilizing factor diverged");
    }
    Field next(qh.grid_ptr(), Representation::Fourier);
    auto xv = next.values();
    for (std::size_t j = 0; j < n; ++j) xv[j] = factor * nh[j] / (1.0 + k[j] * k[j]);
    symmetrize(next);
    const Field diff = next - st.q;
    const double nnorm = l2_norm(next);
    if (!(nnorm > 0.0)) throw ConvergenceError("ground state: iterate collapsed to zero");
    st.update = l2_norm(diff) / nnorm;
    st.q = std::move(next);
  }
}

NonlinearitySpec line_spec(double p, const GroundStateConfig& cfg, double half_width) {
  NonlinearitySpec s = NonlinearitySpec::line(p, half_width, cfg.panel_nodes);
  s.panel_width = cfg.panel_width;
  s.tail_closure = cfg.tail_closure;
  return s;
}

}  // namespace

double GroundStateConfig::resolved_length() const {
  return length > 0.0 ? length : 64.0 * std::numbers::pi;
}

GroundState petviashvili_solve(double p, const GroundStateConfig& cfg) {
  if (!(p >= 9.0)) throw DomainError("ground state requires p >= 9");
  if (!(cfg.update_tol > 0.0) || !(cfg.residual_tol > 0.0)) {
    throw DomainError("ground state tolerances must be positive");
  }
  if (cfg.max_iterations == 0) throw DomainError("ground state needs at least one iteration");
  const GridPtr grid = make_grid(cfg.n, cfg.resolved_length());
  Field q = cfg.seed ? *cfg.seed : gaussian(grid);
  if (!(q.grid() == *grid)) throw DomainError("ground state seed grid mismatch");

  double half_width = cfg.half_width;
  std::size_t used = 0;
  std::optional<SolveState> solved;
  TruncationChoice choice;
  for (;;) {
    const NonlinearitySpec spec = line_spec(p, cfg, half_width);
    const AveragedNonlinearity op(grid, spec);
    solved = iterate(q, op, cfg, cfg.max_iterations - std::min(used, cfg.max_iterations));
    used += solved->iterations;
    choice = select_truncation(solved->q, spec, cfg.extension_tol,
                               std::max(cfg.max_half_width, half_width));
    if (choice.half_width <= half_width) break;
    half_width = choice.half_width;
    q = solved->q;
  }
  const SolveState& st = *solved;

  GroundState gs{st.q};
  gs.p = p;
  gs.line = line_spec(p, cfg, half_width);
  gs.mass_Q = mass(st.q);
  gs.grad_sq_Q = grad_norm_sq(st.q);
  gs.strichartz_Q = st.strichartz;
  gs.el_residual = st.residual;
  gs.last_update = st.update;
  gs.iterations = used;
  gs.truncation_capped = choice.capped;
  gs.outer_panel_fraction = choice.outer_fraction;
  gs.c_p_estimate = gs.strichartz_Q / (std::pow(gs.mass_Q, 0.25 * (p + 7.0)) *
                                       std::pow(gs.grad_sq_Q, 0.25 * (p - 5.0)));
  const Bounds b = analytic_bounds(p);
  if (!(gs.c_p_estimate >= b.lower * (1.0 - 1e-6)) || !(gs.c_p_estimate <= b.upper)) {
    std::ostringstream os;
    os.precision(10);
    os << "ground state: C_p estimate " << gs.c_p_estimate << " outside [" << b.lower << ", "
       << b.upper << "]";
    throw NumericalError(os.str());
  }
  return gs;
}

Bounds analytic_bounds(double p) {
  if (!(p > 5.0)) throw DomainError("analytic bounds require p > 5");
  const double a = 0.5;
  const double c = 0.25 * (p - 3.0);
  const double log_beta = std::lgamma(a) + std::lgamma(c) - std::lgamma(a + c);
  const double lower = std::pow(2.0, 0.25 * (p - 7.0)) * std::pow(std::numbers::pi, -0.25 * (p - 1.0)) /
                       std::sqrt(p + 1.0) * std::exp(log_beta);
  return {lower, 0.5 / std::sqrt(3.0)};
}

double NormIdentityReport::max_abs() const {
  return std::max({std::abs(mass), std::abs(gradient), std::abs(strichartz), std::abs(pairing)});
}

NormIdentityReport verify_norm_identities(const GroundState& gs) {
  const double p = gs.p;
  const double m = gs.mass_Q;
  const double expected_mass =
      std::pow(2.0 * (p + 1.0) * (p - 5.0) / ((p + 7.0) * (p + 7.0) * gs.c_p_estimate),
               2.0 / (p - 1.0)) *
      std::sqrt((p + 7.0) / (p - 5.0));
  NormIdentityReport r;
  r.mass = (m - expected_mass) / expected_mass;
  const double g_expected = (p - 5.0) / (p + 7.0) * m;
  r.gradient = (gs.grad_sq_Q - g_expected) / g_expected;
  const double s_expected = 2.0 * (p + 1.0) / (p + 7.0) * m;
  r.strichartz = (gs.strichartz_Q - s_expected) / s_expected;
  r.pairing = (gs.grad_sq_Q + m - gs.strichartz_Q) / m;
  return r;
}

double Thresholds::consistency() const {
  double worst = 0.0;
  if (grad_mass_from_norms > 0.0) {
    worst = std::max(worst, std::abs(grad_mass_from_norms - grad_mass_threshold) / grad_mass_threshold);
  }
  if (energy_mass_from_norms != 0.0) {
    worst = std::max(worst, std::abs(energy_mass_from_norms - energy_mass_threshold) /
                                std::abs(energy_mass_threshold));
  }
  return worst;
}

Thresholds thresholds_from_constant(double p, double c_p) {
  if (!(p > 9.0)) throw DomainError("dichotomy thresholds require p > 9");
  if (!(c_p > 0.0)) throw DomainError("sharp constant must be positive");
  Thresholds t;
  t.p = p;
  t.alpha = (p + 7.0) / (p - 9.0);
  t.c_p = c_p;
  t.grad_mass_threshold = std::pow(2.0 * (p + 1.0) / ((p - 5.0) * c_p), 2.0 / (p - 9.0));
  t.energy_mass_threshold =
      (p - 9.0) / (2.0 * (p - 5.0)) * t.grad_mass_threshold * t.grad_mass_threshold;
  return t;
}

Thresholds dichotomy_thresholds(const GroundState& gs) {
  Thresholds t = thresholds_from_constant(gs.p, gs.c_p_estimate);
  const double e_inf = 0.5 * gs.grad_sq_Q - gs.strichartz_Q / (gs.p + 1.0);
  t.grad_mass_from_norms = std::sqrt(gs.grad_sq_Q) * std::pow(gs.mass_Q, 0.5 * t.alpha);
  t.energy_mass_from_norms = e_inf * std::pow(gs.mass_Q, t.alpha);
  return t;
}

std::string ground_state_json(const GroundState& gs, const std::string& snapshot) {
  const Bounds b = analytic_bounds(gs.p);
  const NormIdentityReport r = verify_norm_identities(gs);
  json j;
  j["p"] = gs.p;
  j["c_p_estimate"] = gs.c_p_estimate;
  j["bounds"] = {{"lower", b.lower}, {"upper", b.upper}};
  j["mass_Q"] = gs.mass_Q;
  j["grad_sq_Q"] = gs.grad_sq_Q;
  j["strichartz_Q"] = gs.strichartz_Q;
  j["el_residual"] = gs.el_residual;
  j["last_update"] = gs.last_update;
  j["iterations"] = gs.iterations;
  j["norm_identities"] = {{"mass", r.mass},
                          {"gradient", r.gradient},
                          {"strichartz", r.strichartz},
                          {"pairing", r.pairing}};
  j["grid"] = {{"n", gs.profile.size()}, {"length", gs.profile.grid().length()}};
  j["truncation"] = {{"rule", "symmetric composite Gauss-Legendre on [-R,R], extended while the "
                              "outer panel pair exceeds the tolerance, up to a cap"},
                     {"half_width", gs.line.half_width},
                     {"panel_width", gs.line.panel_width},
                     {"panel_nodes", gs.line.panel_nodes},
                     {"tail_closure", gs.line.tail_closure},
                     {"capped", gs.truncation_capped},
                     {"outer_panel_fraction", gs.outer_panel_fraction}};
  if (gs.p > 9.0) {
    const Thresholds t = dichotomy_thresholds(gs);
    j["thresholds"] = {{"alpha", t.alpha},
                       {"grad_mass", t.grad_mass_threshold},
                       {"energy_mass", t.energy_mass_threshold},
                       {"grad_mass_from_norms", t.grad_mass_from_norms},
                       {"energy_mass_from_norms", t.energy_mass_from_norms}};
  }
  j["snapshot"] = snapshot;
  return j.dump(2);
}

std::filesystem::path write_ground_state(const std::filesystem::path& dir, const GroundState& gs) {
  std::filesystem::create_directories(dir);
  const std::string bin = "groundstate_Q.bin";
  write_snapshot(dir / bin, gs.profile, 0.0);
  const auto path = dir / "groundstate.json";
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << ground_state_json(gs, bin) << '\n';
  return path;
}

GroundState read_ground_state(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw DomainError("cannot read " + json_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("malformed ground state file: " + std::string(e.what()));
  }
  try {
    auto snap = read_snapshot(json_path.parent_path() / j.at("snapshot").get<std::string>());
    GroundState gs{std::move(snap.field)};
    gs.p = j.at("p").get<double>();
    gs.c_p_estimate = j.at("c_p_estimate").get<double>();
    gs.mass_Q = j.at("mass_Q").get<double>();
    gs.grad_sq_Q = j.at("grad_sq_Q").get<double>();
    gs.strichartz_Q = j.at("strichartz_Q").get<double>();
    gs.el_residual = j.at("el_residual").get<double>();
    gs.last_update = j.at("last_update").get<double>();
    gs.iterations = j.at("iterations").get<std::size_t>();
    const auto& t = j.at("truncation");
    gs.line = NonlinearitySpec::line(gs.p, t.at("half_width").get<double>(),
                                     t.at("panel_nodes").get<std::size_t>());
    gs.line.panel_width = t.at("panel_width").get<double>();
    gs.line.tail_closure = t.at("tail_closure").get<bool>();
    gs.truncation_capped = t.at("capped").get<bool>();
    gs.outer_panel_fraction = t.at("outer_panel_fraction").get<double>();
    return gs;
  } catch (const json::exception& e) {
    throw DomainError("malformed ground state file: " + std::string(e.what()));
  }
}

}  // namespace dmnls
