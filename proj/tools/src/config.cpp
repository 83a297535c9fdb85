#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "dmnls/harness.hpp"
#include "json.hpp"

namespace dmnls::harness {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string format(std::size_t v) { return std::to_string(v); }
std::string format(bool v) { return v ? "true" : "false"; }
std::string format(const std::string& v) { return v; }
std::string format(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

void parse(const std::string& text, double& out) {
  const std::string s = trim(text);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end || s.empty()) throw ConfigError("not a number: '" + text + "'");
  if (!std::isfinite(out)) throw ConfigError("not a finite number: '" + text + "'");
}
void parse(const std::string& text, std::size_t& out) {
  const std::string s = trim(text);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ConfigError("not a nonnegative integer: '" + text + "'");
  }
}
void parse(const std::string& text, bool& out) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
  } else if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
  } else {
    throw ConfigError("not a boolean: '" + text + "'");
  }
}
void parse(const std::string& text, std::string& out) { out = trim(text); }
void parse(const std::string& text, std::vector<std::string>& out) {
  out.clear();
  const std::string s = trim(text);
  if (s.empty()) return;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
}

nlohmann::json as_json(double v) { return v; }
nlohmann::json as_json(std::size_t v) { return v; }
nlohmann::json as_json(bool v) { return v; }
nlohmann::json as_json(const std::string& v) { return v; }
nlohmann::json as_json(const std::vector<std::string>& v) { return v; }

struct Entry {
  std::string section;
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<nlohmann::json(const ExperimentConfig&)> get_json;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class S, class T>
Entry entry(const char* section, const char* key, S ExperimentConfig::*group, T S::*member) {
  return {section, key,
          [=](const ExperimentConfig& c) { return format(c.*group.*member); },
          [=](const ExperimentConfig& c) { return as_json(c.*group.*member); },
          [=](ExperimentConfig& c, const std::string& v) { parse(v, c.*group.*member); }};
}

const std::vector<Entry>& schema() {
  using C = ExperimentConfig;
  static const std::vector<Entry> entries{
      entry("grid", "n", &C::grid, &C::Grid::n),
      entry("grid", "length", &C::grid, &C::Grid::length),
      entry("model", "p", &C::model, &C::Model::p),
      entry("quadrature", "order", &C::quadrature, &C::Quadrature::order),
      entry("quadrature", "half_width", &C::quadrature, &C::Quadrature::half_width),
      entry("quadrature", "panel_width", &C::quadrature, &C::Quadrature::panel_width),
      entry("quadrature", "panel_nodes", &C::quadrature, &C::Quadrature::panel_nodes),
      entry("quadrature", "tail_closure", &C::quadrature, &C::Quadrature::tail_closure),
      entry("quadrature", "extension_tol", &C::quadrature, &C::Quadrature::extension_tol),
      entry("quadrature", "max_half_width", &C::quadrature, &C::Quadrature::max_half_width),
      entry("groundstate", "update_tol", &C::groundstate, &C::GroundStateSolver::update_tol),
      entry("groundstate", "residual_tol", &C::groundstate, &C::GroundStateSolver::residual_tol),
      entry("groundstate", "max_iterations", &C::groundstate, &C::GroundStateSolver::max_iterations),
      entry("groundstate", "file", &C::groundstate, &C::GroundStateSolver::file),
      entry("evolve", "dt", &C::evolve, &C::Evolve::dt),
      entry("evolve", "t_end", &C::evolve, &C::Evolve::t_end),
      entry("evolve", "stride", &C::evolve, &C::Evolve::stride),
      entry("evolve", "snapshot_stride", &C::evolve, &C::Evolve::snapshot_stride),
      entry("evolve", "growth_factor", &C::evolve, &C::Evolve::growth_factor),
      entry("evolve", "amplitude_cap", &C::evolve, &C::Evolve::amplitude_cap),
      entry("evolve", "min_dt", &C::evolve, &C::Evolve::min_dt),
      entry("evolve", "max_gradient_change", &C::evolve, &C::Evolve::max_gradient_change),
      entry("evolve", "nonlinear", &C::evolve, &C::Evolve::nonlinear),
      entry("initial", "family", &C::initial, &C::Initial::family),
      entry("initial", "amplitude", &C::initial, &C::Initial::amplitude),
      entry("initial", "width", &C::initial, &C::Initial::width),
      entry("initial", "chirp", &C::initial, &C::Initial::chirp),
      entry("initial", "shift", &C::initial, &C::Initial::shift),
      entry("initial", "phase", &C::initial, &C::Initial::phase),
      entry("sweep", "key", &C::sweep, &C::Sweep::key),
      entry("sweep", "values", &C::sweep, &C::Sweep::values),
      entry("sweep", "command", &C::sweep, &C::Sweep::command),
      entry("output", "dir", &C::output, &C::Output::dir),
      entry("output", "label", &C::output, &C::Output::label),
  };
  return entries;
}

const Entry& find_entry(const std::string& section, const std::string& key) {
  for (const Entry& e : schema()) {
    if (e.section == section && e.key == key) return e;
  }
  throw ConfigError("unknown config key '" + section + "." + key + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(grid.n >= 8 && (grid.n & (grid.n - 1)) == 0, "grid.n must be a power of two >= 8");
  require(grid.length > 0.0, "grid.length must be positive");
  require(model.p >= 1.0, "model.p must be >= 1");
  require(quadrature.order >= 4, "quadrature.order must be >= 4");
  require(quadrature.half_width > 0.0, "quadrature.half_width must be positive");
  require(quadrature.panel_width > 0.0, "quadrature.panel_width must be positive");
  require(quadrature.panel_nodes >= 4, "quadrature.panel_nodes must be >= 4");
  require(quadrature.extension_tol > 0.0, "quadrature.extension_tol must be positive");
  require(quadrature.max_half_width > 0.0, "quadrature.max_half_width must be positive");
  require(groundstate.update_tol > 0.0, "groundstate.update_tol must be positive");
  require(groundstate.residual_tol > 0.0, "groundstate.residual_tol must be positive");
  require(groundstate.max_iterations >= 1, "groundstate.max_iterations must be >= 1");
  require(evolve.dt > 0.0, "evolve.dt must be positive");
  require(evolve.t_end != 0.0, "evolve.t_end must be nonzero");
  require(evolve.stride >= 1, "evolve.stride must be >= 1");
  require(evolve.growth_factor > 1.0, "evolve.growth_factor must exceed 1");
  require(evolve.amplitude_cap > 0.0, "evolve.amplitude_cap must be positive");
  require(evolve.min_dt > 0.0 && evolve.min_dt <= evolve.dt, "evolve.min_dt must lie in (0, dt]");
  require(evolve.max_gradient_change > 0.0, "evolve.max_gradient_change must be positive");
  require(initial.family == "gaussian" || initial.family == "sech",
          "initial.family must be gaussian or sech");
  require(initial.width > 0.0, "initial.width must be positive");
  require(sweep.command != "sweep" && sweep.command != "bounds",
          "sweep.command must be an artifact-producing subcommand");
  bool known = false;
  for (const auto& s : subcommands()) known = known || s == sweep.command;
  require(known, "unknown sweep.command '" + sweep.command + "'");
  require(!output.dir.empty(), "output.dir must be set");
}

GridPtr ExperimentConfig::make_grid() const { return dmnls::make_grid(grid.n, grid.length); }

GroundStateConfig ExperimentConfig::ground_state_config() const {
  GroundStateConfig g;
  g.n = grid.n;
  g.length = grid.length;
  g.half_width = quadrature.half_width;
  g.panel_nodes = quadrature.panel_nodes;
  g.panel_width = quadrature.panel_width;
  g.tail_closure = quadrature.tail_closure;
  g.extension_tol = quadrature.extension_tol;
  g.max_half_width = quadrature.max_half_width;
  g.update_tol = groundstate.update_tol;
  g.residual_tol = groundstate.residual_tol;
  g.max_iterations = groundstate.max_iterations;
  return g;
}

EvolveConfig ExperimentConfig::evolve_config() const {
  EvolveConfig e;
  e.p = model.p;
  e.dt = evolve.dt;
  e.t_end = evolve.t_end;
  e.order = quadrature.order;
  e.stride = evolve.stride;
  e.snapshot_stride = evolve.snapshot_stride;
  e.growth_factor = evolve.growth_factor;
  e.amplitude_cap = evolve.amplitude_cap;
  e.min_dt = evolve.min_dt;
  e.max_gradient_change = evolve.max_gradient_change;
  e.nonlinear = evolve.nonlinear;
  return e;
}

ProfileParams ExperimentConfig::profile() const {
  ProfileParams p;
  p.family = parse_profile_family(initial.family);
  p.amplitude = initial.amplitude;
  p.width = initial.width;
  p.chirp = initial.chirp;
  p.shift = initial.shift;
  p.phase = initial.phase;
  return p;
}

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      bool known = false;
      for (const Entry& e : schema()) known = known || e.section == section;
      if (!known || !body.data().empty()) {
        throw ConfigError("config entry '" + section + "' is not a known section");
      }
      continue;
    }
    for (const auto& [key, value] : body) {
      const Entry& e = find_entry(section, key);
      try {
        e.set(cfg, value.data());
      } catch (const ConfigError& err) {
        throw ConfigError(section + "." + key + ": " + err.what());
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void set_value(ExperimentConfig& config, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError("override key must be section.key: '" + dotted_key + "'");
  const Entry& e = find_entry(trim(dotted_key.substr(0, dot)), trim(dotted_key.substr(dot + 1)));
  try {
    e.set(config, value);
  } catch (const ConfigError& err) {
    throw ConfigError(dotted_key + ": " + err.what());
  }
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value: '" + assignment + "'");
  set_value(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string to_ini(const ExperimentConfig& config) {
  std::string out;
  std::string current;
  for (const Entry& e : schema()) {
    if (e.section != current) {
      out += (current.empty() ? "[" : "\n[") + e.section + "]\n";
      current = e.section;
    }
    out += e.key + " = " + e.get(config) + "\n";
  }
  return out;
}

std::string to_json(const ExperimentConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const Entry& e : schema()) j[e.section][e.key] = e.get_json(config);
  return j.dump(2);
}

}  // namespace dmnls::harness
