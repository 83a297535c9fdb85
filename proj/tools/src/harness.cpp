#include "dmnls/harness.hpp"

#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace dmnls::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

void write_json(const fs::path& path, json j, const ExperimentConfig& cfg) {
  j["config"] = json::parse(to_json(cfg));
  write_text(path, j.dump(2));
}

struct Context {
  const ExperimentConfig& cfg;
  fs::path out;
  std::ostream& log;
  std::optional<GroundState> gs;
};

const GroundState& ground_state(Context& ctx, bool write) {
  if (ctx.gs) return *ctx.gs;
  const auto& cfg = ctx.cfg;
  if (!cfg.groundstate.file.empty()) {
    GroundState gs = read_ground_state(cfg.groundstate.file);
    if (gs.p != cfg.model.p) {
      throw ConfigError("groundstate.file was computed for p = " + std::to_string(gs.p));
    }
    if (gs.profile.size() != cfg.grid.n || gs.profile.grid().length() != cfg.grid.length) {
      throw ConfigError("groundstate.file grid differs from [grid]");
    }
    ctx.log << "ground state: loaded " << cfg.groundstate.file << '\n';
    return ctx.gs.emplace(std::move(gs));
  }
  if (cfg.model.p < 9.0) throw ConfigError("ground state requires model.p >= 9");
  GroundState gs = petviashvili_solve(cfg.model.p, cfg.ground_state_config());
  if (write) {
    write_snapshot(ctx.out / "groundstate_Q.bin", gs.profile, 0.0);
    json j = json::parse(ground_state_json(gs, "groundstate_Q.bin"));
    write_json(ctx.out / "groundstate.json", std::move(j), cfg);
  }
  ctx.log << "ground state: C_" << cfg.model.p << " = " << gs.c_p_estimate << " after "
          << gs.iterations << " iterations, residual " << gs.el_residual << '\n';
  return ctx.gs.emplace(std::move(gs));
}

Field initial_data(const ExperimentConfig& cfg) { return make_profile(cfg.make_grid(), cfg.profile()); }

void run_groundstate(Context& ctx) {
  const GroundState& gs = ground_state(ctx, true);
  const Bounds b = analytic_bounds(gs.p);
  ctx.log << bounds_row(gs.p) << '\n';
  ctx.log << "estimate " << gs.c_p_estimate
          << (gs.c_p_estimate >= b.lower && gs.c_p_estimate <= b.upper ? " inside" : " outside")
          << " the bracket\n";
}

void run_bounds(Context& ctx) {
  const double p = ctx.cfg.model.p;
  const std::string row = bounds_row(p);
  const Bounds b = analytic_bounds(p);
  ctx.log << row << '\n';
  json j{{"p", p}, {"lower", b.lower}, {"upper", b.upper}, {"row", row}};
  if (!ctx.cfg.groundstate.file.empty()) {
    const GroundState& gs = ground_state(ctx, false);
    const bool inside = gs.c_p_estimate >= b.lower && gs.c_p_estimate <= b.upper;
    j["estimate"] = gs.c_p_estimate;
    j["inside_bracket"] = inside;
    ctx.log << "estimate " << gs.c_p_estimate << (inside ? " inside" : " outside") << " the bracket\n";
  }
  write_json(ctx.out / "bounds.json", std::move(j), ctx.cfg);
}

Trajectory run_evolve(Context& ctx) {
  const Field u0 = initial_data(ctx.cfg);
  const Trajectory traj = evolve(u0, ctx.cfg.evolve_config());
  write_trajectory_csv(ctx.out / "trajectory.csv", traj);
  if (!traj.snapshots.empty()) {
    fs::create_directories(ctx.out / "snapshots");
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%05zu.bin", i);
      write_snapshot(ctx.out / "snapshots" / name, traj.snapshots[i].second, traj.snapshots[i].first);
    }
  }
  write_snapshot(ctx.out / "final_state.bin", traj.final_state, traj.end_time);
  const ConservationReport cr = conservation_report(traj);
  json j{{"status", to_string(traj.status)},
         {"reason", traj.reason},
         {"end_time", traj.end_time},
         {"steps", traj.steps},
         {"rejected_steps", traj.rejected_steps},
         {"samples", traj.samples.size()},
         {"snapshots", traj.snapshots.size()},
         {"initial_energy", traj.initial_energy},
         {"sample_spacing", traj.sample_spacing},
         {"conservation", {{"mass_drift", cr.mass_drift}, {"energy_drift", cr.energy_drift}}}};
  write_json(ctx.out / "evolve.json", std::move(j), ctx.cfg);
  ctx.log << "evolve: " << to_string(traj.status) << " at t = " << traj.end_time
          << ", mass drift " << cr.mass_drift << ", energy drift " << cr.energy_drift << '\n';
  return traj;
}

json check_json(const InequalityCheck& c) {
  return {{"checked", c.checked},
          {"satisfied", c.satisfied},
          {"fraction", c.fraction()},
          {"worst_excess", c.worst_excess},
          {"tolerance", c.tolerance}};
}

void run_virial(Context& ctx, const Trajectory& traj) {
  const auto& cfg = ctx.cfg;
  std::optional<Thresholds> thr;
  if (cfg.model.p > 9.0) thr = dichotomy_thresholds(ground_state(ctx, true));
  const Field u0 = initial_data(cfg);
  const VirialTrace trace = virial_trace(traj, thr ? &*thr : nullptr, mass(u0), traj.initial_energy);
  write_virial_csv(ctx.out / "virial.csv", trace);
  const double tol = virial_tolerance(trace, cfg.grid.length / static_cast<double>(cfg.grid.n));
  json j = json::parse(virial_summary_json(trace));
  j["tolerance"] = tol;
  j["checks"] = {{"virial_inequality", check_json(check_virial_inequality(trace, tol))},
                 {"variance_bound", check_json(check_variance_bound(trace, tol))},
                 {"variance_growth", check_json(check_variance_growth(trace, tol))}};
  j["run_status"] = to_string(traj.status);
  j["run_end_time"] = traj.end_time;
  write_json(ctx.out / "virial.json", std::move(j), cfg);
  ctx.log << "virial: " << trace.points.size() << " samples";
  if (trace.predicted_time) ctx.log << ", predicted blowup before t = " << *trace.predicted_time;
  ctx.log << (trace.trusted ? "" : " (untrusted: boundary mass)") << '\n';
}

void run_classify(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.model.p < 9.0) throw ConfigError("classify requires model.p >= 9");
  const GroundState& gs = ground_state(ctx, true);
  const Field u0 = initial_data(cfg);
  Classification c;
  json j;
  if (cfg.model.p == 9.0) {
    c = classify_critical(u0, gs, cfg.quadrature.order);
    j = json::parse(classification_json(c));
  } else {
    const Thresholds t = dichotomy_thresholds(gs);
    c = classify(u0, cfg.model.p, t, cfg.quadrature.order);
    j = json::parse(classification_json(c));
    j["threshold_consistency"] = t.consistency();
  }
  write_json(ctx.out / "verdict.json", std::move(j), cfg);
  ctx.log << "verdict: " << to_string(c.verdict) << '\n';
}

void run_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.sweep.key.empty() || cfg.sweep.values.empty()) {
    throw ConfigError("sweep needs sweep.key and sweep.values");
  }
  const std::size_t count = cfg.sweep.values.size();
  std::vector<ExperimentConfig> configs(count, cfg);
  std::vector<fs::path> dirs(count);
  for (std::size_t i = 0; i < count; ++i) {
    set_value(configs[i], cfg.sweep.key, cfg.sweep.values[i]);
    configs[i].sweep = {};
    configs[i].validate();
    char name[32];
    std::snprintf(name, sizeof name, "sweep_%03zu", i);
    dirs[i] = ctx.out / name;
    configs[i].output.dir = dirs[i].string();
  }
  std::vector<int> codes(count, 0);
  std::vector<std::string> logs(count);
  parallel_for(count, [&](std::size_t i) {
    std::ostringstream os;
    codes[i] = run_experiment(cfg.sweep.command, configs[i], dirs[i], os);
    logs[i] = os.str();
  });
  json runs = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    ctx.log << "[" << cfg.sweep.key << " = " << cfg.sweep.values[i] << "]\n" << logs[i];
    runs.push_back({{"value", cfg.sweep.values[i]},
                    {"dir", dirs[i].filename().string()},
                    {"exit_code", codes[i]}});
  }
  write_json(ctx.out / "sweep.json", {{"command", cfg.sweep.command}, {"key", cfg.sweep.key}, {"runs", runs}},
             cfg);
  for (int code : codes) {
    if (code != kSuccess) throw NumericalError("sweep: at least one run failed");
  }
}

void dispatch(const std::string& sub, Context& ctx) {
  if (sub == "groundstate") {
    run_groundstate(ctx);
  } else if (sub == "bounds") {
    run_bounds(ctx);
  } else if (sub == "evolve") {
    run_evolve(ctx);
  } else if (sub == "virial") {
    run_virial(ctx, run_evolve(ctx));
  } else if (sub == "classify") {
    run_classify(ctx);
  } else if (sub == "pipeline") {
    if (ctx.cfg.model.p >= 9.0) run_classify(ctx);
    run_virial(ctx, run_evolve(ctx));
  } else if (sub == "sweep") {
    run_sweep(ctx);
  } else {
    throw ConfigError("unknown subcommand '" + sub + "'");
  }
}

int fail(const fs::path& out, const ExperimentConfig& cfg, std::ostream& log, int code,
         const std::string& kind, const std::string& message) {
  log << "error: " << message << '\n';
  try {
    fs::create_directories(out);
    write_json(out / "error.json", {{"exit_code", code}, {"kind", kind}, {"message", message}}, cfg);
  } catch (const std::exception&) {
  }
  return code;
}

}  // namespace

std::string bounds_row(double p) {
  if (!(p >= 9.0)) throw ConfigError("bounds require p >= 9");
  const Bounds b = analytic_bounds(p);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.7f ≤ C_%g ≤ %.7f", b.lower, p, b.upper);
  return buf;
}

int run_experiment(const std::string& subcommand, const ExperimentConfig& config,
                   const fs::path& out_dir, std::ostream& log) {
  try {
    config.validate();
    fs::create_directories(out_dir);
    Context ctx{config, out_dir, log, std::nullopt};
    dispatch(subcommand, ctx);
    return kSuccess;
  } catch (const ConfigError& e) {
    return fail(out_dir, config, log, kUsageError, "config", e.what());
  } catch (const DomainError& e) {
    return fail(out_dir, config, log, kUsageError, "domain", e.what());
  } catch (const ConvergenceError& e) {
    return fail(out_dir, config, log, kNumericalError, "convergence", e.what());
  } catch (const NumericalError& e) {
    return fail(out_dir, config, log, kNumericalError, "numerical", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(out_dir, config, log, kUsageError, "io", e.what());
  }
}

}  // namespace dmnls::harness
