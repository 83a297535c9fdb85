#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dmnls/harness.hpp"

namespace h = dmnls::harness;

namespace {

const char* describe(const std::string& name) {
  if (name == "groundstate") return "solve for Q and estimate the sharp constant";
  if (name == "bounds") return "print the analytic bracket for C_p";
  if (name == "evolve") return "integrate the initial data in time";
  if (name == "virial") return "evolve and check the virial bounds";
  if (name == "classify") return "classify the initial data against the thresholds";
  if (name == "pipeline") return "classify, evolve and check the virial bounds";
  return "run one subcommand over a list of values";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the dispersion-managed NLS"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  double bounds_p = 0.0;

  for (const auto& name : h::subcommands()) {
    auto* sub = app.add_subcommand(name, describe(name));
    auto* cfg = sub->add_option("--config", config_path, "INI experiment file");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--override", overrides, "section.key=value")->take_all();
    if (name == "bounds") {
      sub->add_option("--p", bounds_p, "exponent p (>= 9)");
    } else {
      cfg->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kUsageError;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  h::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = h::load_config(config_path);
    for (const auto& o : overrides) h::apply_override(config, o);
    if (bounds_p != 0.0) config.model.p = bounds_p;
    if (!out_dir.empty()) config.output.dir = out_dir;
    if (subcommand == "bounds" && config_path.empty()) {
      std::cout << h::bounds_row(config.model.p) << '\n';
      return h::kSuccess;
    }
  } catch (const h::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kUsageError;
  }
  return h::run_experiment(subcommand, config, config.output.dir, std::cout);
}
