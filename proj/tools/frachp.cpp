// frachp: simulate stochastic fractional Hamilton-Pontryagin systems.
//
//   frachp simulate|convergence|action-check|volterra --config FILE [--seed S] [--out DIR]

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "frachp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic fractional Hamilton-Pontryagin and Langevin simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(frachp::kCodeVersion));

  using Command = std::function<int(const frachp::RunConfig&, std::ostream&)>;
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"simulate", {"Integrate one noisy and one deterministic trajectory", frachp::cmd_simulate}},
      {"convergence", {"Estimate the strong convergence order", frachp::cmd_convergence}},
      {"action-check", {"Check stationarity of the discrete HP action", frachp::cmd_action_check}},
      {"volterra", {"Fractional Black-Scholes Volterra ensemble", frachp::cmd_volterra}},
  };

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--out", out_dir, "override the output directory");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = frachp::load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.outputs = *out_dir;
    for (const auto& [name, entry] : commands) {
      if (app.got_subcommand(name)) {
        return entry.second(config, std::cout);
      }
    }
  } catch (const frachp::Error& e) {
    std::cerr << "frachp: " << e.what() << '\n';
    return frachp::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "frachp: " << e.what() << '\n';
    return frachp::kExitError;
  }
  return frachp::kExitError;
}
