// pdm-lab <subcommand> --config <file> [--out <dir>] [--theta x] [--alpha a] [--gamma g]

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdm/commands.hpp"
#include "pdm/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Position-dependent-mass phase-space lab"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<double> gamma;

  for (const auto& name : pdm::cli::subcommand_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--theta", theta, "override theta");
    sub->add_option("--alpha", alpha, "override ordering alpha");
    sub->add_option("--gamma", gamma, "override ordering gamma");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    pdm::cli::Overrides overrides{theta, alpha, gamma};
    std::vector<std::string> applied;
    if (theta) applied.push_back("theta=" + pdm::cli::format_number(*theta));
    if (alpha) applied.push_back("ordering.alpha=" + pdm::cli::format_number(*alpha));
    if (gamma) applied.push_back("ordering.gamma=" + pdm::cli::format_number(*gamma));

    auto scenario = pdm::cli::build_scenario(pdm::cli::Config::load(config_path), overrides);
    const auto outputs = pdm::cli::run_subcommand(name, scenario, out_dir);
    pdm::cli::write_manifest(out_dir, {name, config_path, applied, scenario.config.resolved(), PDM_LAB_VERSION,
                                       outputs});
    for (const auto& p : outputs) std::cout << p.string() << '\n';
    return 0;
  } catch (const pdm::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
