#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcran/fixtures.hpp"
#include "hcran/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_solve(const std::string& config_path, const std::string& drop_path,
              std::uint64_t seed, bool seed_given, const std::string& out_path) {
  hcran::ExperimentPlan plan =
      config_path.empty() ? hcran::ExperimentPlan{} : hcran::parse_config(config_path);
  if (seed_given) plan.base_seed = seed;

  hcran::Topology topo;
  hcran::ChannelState ch;
  if (!drop_path.empty()) {
    hcran::load_drop(drop_path, topo, ch);
  } else {
    hcran::DropSpec spec = plan.drop;
    spec.seed = hcran::drop_seed(plan.base_seed, 0);
    topo = hcran::generate_topology(spec);
    ch = hcran::synthesize_channel(topo, spec, plan.config);
  }

  const int num_lpns = topo.num_dbs() - 1;
  const hcran::PowerModel pm = hcran::build_power_model(
      hcran::Architecture::CDSA, plan.config, num_lpns, plan.breakdown, plan.conv);
  auto [sol, rep] = hcran::solve_ee(ch, topo, plan.config, pm);

  nlohmann::json j;
  j["status"] = rep.status == hcran::SolveStatus::Infeasible ? "infeasible"
                : rep.status == hcran::SolveStatus::Converged ? "converged"
                                                              : "max_iters";
  j["ee_bits_per_joule"] = sol.ee_bits_per_joule;
  j["dinkelbach_iters"] = sol.dinkelbach_iters;
  j["dual_iters_total"] = sol.dual_iters_total;
  j["q_trace"] = rep.q_trace;
  if (rep.status != hcran::SolveStatus::Infeasible) {
    const hcran::SolutionSummary sum = hcran::summarize(sol, ch, topo, plan.config);
    j["total_rate_bps"] = sum.total_rate;
    j["se_bps_per_hz"] = sum.total_rate / plan.config.total_bandwidth_hz;
    j["transmit_power_w"] = sum.transmit_power;
    j["wireless_fronthaul_rate_bps"] = sum.wireless_rate;
    j["owner"] = sol.owner;
    j["power_w"] = sol.power_w;
  }
  write_text(out_path, j.dump(2) + "\n");
  return rep.status == hcran::SolveStatus::Infeasible ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed, bool seed_given,
              const std::string& out_path, const std::string& format, int threads) {
  hcran::ExperimentPlan plan =
      config_path.empty() ? hcran::ExperimentPlan{} : hcran::parse_config(config_path);
  if (seed_given) plan.base_seed = seed;
  const hcran::SweepResult result = hcran::run_sweep(plan, threads);
  const auto fmt = format == "json" ? hcran::ResultFormat::JSON : hcran::ResultFormat::CSV;
  write_text(out_path, fmt == hcran::ResultFormat::CSV
                           ? hcran::results_to_csv(result)
                           : hcran::results_to_json(result, plan));
  bool any_feasible = false;
  for (const auto& pt : result.points)
    for (const auto& cell : pt.cells) any_feasible = any_feasible || cell.stats.feasible_drops > 0;
  return any_feasible ? kExitOk : kExitInfeasible;
}

int cmd_oracle(const std::string& fixture_path, int grid_levels) {
  const hcran::OracleFixture fx = hcran::load_fixture(fixture_path);
  const int levels = grid_levels > 0 ? grid_levels : fx.grid_levels;
  const hcran::OracleResult oracle =
      hcran::brute_force_solve(fx.ch, fx.topo, fx.cfg, fx.pm, levels);
  auto [sol, rep] = hcran::solve_ee(fx.ch, fx.topo, fx.cfg, fx.pm);
  const double ratio =
      oracle.best_ee > 0 ? sol.ee_bits_per_joule / oracle.best_ee : 0.0;
  std::printf("%s: oracle_ee=%.9g solver_ee=%.9g ratio=%.6f golden=%.9g searched=%lld\n",
              fx.name.c_str(), oracle.best_ee, sol.ee_bits_per_joule, ratio,
              fx.golden_oracle_ee, oracle.instances_searched);
  if (oracle.status == hcran::SolveStatus::Infeasible ||
      rep.status == hcran::SolveStatus::Infeasible)
    return kExitInfeasible;
  return (ratio >= 0.98 && ratio <= 1.001) ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency solver and simulation harness for H-CRAN downlinks"};
  app.require_subcommand(1);

  std::string config_path, drop_path, out_path, format = "csv", fixture_path;
  std::uint64_t seed = 0;
  int threads = 1, grid_levels = 0;

  auto* solve = app.add_subcommand("solve", "Solve one instance (generated or from a drop file)");
  solve->add_option("--config", config_path, "Plan/config JSON file");
  solve->add_option("--drop", drop_path, "Drop JSON file (topology + gains)");
  auto* solve_seed = solve->add_option("--seed", seed, "Seed override");
  solve->add_option("--out", out_path, "Output path ('-' for stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep from a plan file");
  sweep->add_option("--config", config_path, "Plan JSON file (empty file -> defaults)");
  auto* sweep_seed = sweep->add_option("--seed", seed, "Base seed override");
  sweep->add_option("--out", out_path, "Output path ('-' for stdout)");
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", threads, "Parallel drops per sweep point")
      ->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Verify the solver against a frozen fixture");
  oracle->add_option("--config", fixture_path, "Fixture JSON file")->required();
  oracle->add_option("--grid-levels", grid_levels, "Override the fixture's power grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed())
      return cmd_solve(config_path, drop_path, seed, solve_seed->count() > 0, out_path);
    if (sweep->parsed())
      return cmd_sweep(config_path, seed, sweep_seed->count() > 0, out_path, format, threads);
    return cmd_oracle(fixture_path, grid_levels);
  } catch (const hcran::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hcran::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
