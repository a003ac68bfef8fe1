#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spp/errors.hpp"
#include "spp/hj_solver.hpp"
#include "spp/runner.hpp"
#include "spp/scenario.hpp"
#include "spp/simulator.hpp"

namespace {

void log_line(const std::string& s) { std::cerr << s << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential path planning with reachability: plan, simulate and check multi-vehicle scenarios."};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string plan_scenario, plan_out;
  auto* plan = app.add_subcommand("plan", "Plan every vehicle of a scenario and write the plan bundle");
  plan->add_option("scenario", plan_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", plan_out, "Output directory (default: the scenario's \"output\")");

  std::string sim_dir, sim_model;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Simulate an existing plan directory");
  simulate->add_option("dir", sim_dir, "Plan directory written by `spp plan`")->required();
  simulate->add_option("--seed", sim_seed, "Disturbance seed (default: the scenario's)");
  simulate->add_option("--model", sim_model, "Disturbance model")->check(CLI::IsMember({"zero", "random", "adversarial"}));

  std::string full_scenario, full_out;
  auto* full = app.add_subcommand("full", "Plan, simulate, check and draw");
  full->add_option("scenario", full_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  full->add_option("--out", full_out, "Output directory (default: the scenario's \"output\")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : spp::kExitInput;
  }

  spp::configure_threads_from_env();
  const spp::RunLog log = quiet ? spp::RunLog{} : spp::RunLog{log_line};

  auto out_dir = [&](const std::string& scenario, const std::string& out) -> std::optional<std::string> {
    if (!out.empty()) return out;
    try {
      const spp::Scenario s = spp::load_scenario(scenario);
      if (!s.output.empty()) return s.output;
    } catch (const spp::InputError& e) {
      std::cerr << "input error: " << e.what() << '\n';
      return std::nullopt;
    }
    std::cerr << "input error: no --out given and the scenario names no output directory\n";
    return std::nullopt;
  };

  try {
    if (*plan) {
      const auto out = out_dir(plan_scenario, plan_out);
      return out ? spp::command_plan(plan_scenario, *out, log) : spp::kExitInput;
    }
    if (*simulate) {
      std::optional<spp::DisturbanceKind> model;
      if (!sim_model.empty()) model = spp::disturbance_from_string(sim_model);
      return spp::command_simulate(sim_dir, sim_seed, model, log);
    }
    if (*full) {
      const auto out = out_dir(full_scenario, full_out);
      return out ? spp::command_full(full_scenario, *out, log) : spp::kExitInput;
    }
  } catch (const spp::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return spp::kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
