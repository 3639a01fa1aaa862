#pragma once

#include <cstdint>
#include <string>

#include "hcran/baselines.hpp"
#include "hcran/channel.hpp"

namespace hcran {

enum class SweepAxis { FronthaulCapacity, WirelessDbsCount, MinRate, DbsDensity };
enum class Algorithm { Proposed, Static };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentPlan {
  SweepAxis axis = SweepAxis::FronthaulCapacity;
  std::vector<double> sweep_values{0.8e9};
  std::vector<Algorithm> algorithms{Algorithm::Proposed, Algorithm::Static};
  std::vector<Architecture> architectures{Architecture::CDSA, Architecture::Conventional};
  int drops_per_point = 50;
  std::uint64_t base_seed = 1;
  SystemConfig config;
  DropSpec drop;
  PowerModelBreakdown breakdown;
  ConventionalModelParams conv;
  // Per-DBS cap used by the static baseline: NaN selects equal split of the
  // pooled capacity, except on the WirelessDbsCount axis where the explicit
  // 50 Mbps per-DBS cap applies.
  double static_per_dbs_cap_bps = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
};

struct DropOutcome {
  std::uint64_t seed = 0;
  std::uint64_t drop_hash = 0;
  bool feasible = false;
  double ee_bits_per_joule = 0.0;
  double se_bps_per_hz = 0.0;
  int dinkelbach_iters = 0;
  int dual_iters = 0;
};

struct CellStats {
  double mean_ee = 0.0;
  double std_ee = 0.0;
  double mean_se = 0.0;
  double feasibility_rate = 0.0;
  double mean_solver_iters = 0.0;
  int feasible_drops = 0;
  int total_drops = 0;
};

struct SweepCell {
  Algorithm algorithm;
  Architecture architecture;
  CellStats stats;
  std::vector<DropOutcome> drops;
};

struct SweepPoint {
  double axis_value = 0.0;
  std::vector<SweepCell> cells;
};

struct SweepResult {
  std::string config_hash;
  std::string tool_version;
  std::uint64_t base_seed = 0;
  std::vector<SweepPoint> points;
};

std::string axis_name(SweepAxis axis);
std::string algorithm_name(Algorithm a);
std::string architecture_name(Architecture a);

// Deterministic drop seed, shared across sweep points so that sweep curves
// are paired on identical Monte Carlo drops.
std::uint64_t drop_seed(std::uint64_t base_seed, int drop_index);

std::uint64_t hash_channel(const ChannelState& ch);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan parse_config(const std::string& path);  // empty file -> defaults
std::string config_hash(const ExperimentPlan& plan);

SweepResult run_sweep(const ExperimentPlan& plan, int threads = 1);

enum class ResultFormat { CSV, JSON };
std::string results_to_csv(const SweepResult& result);
std::string results_to_json(const SweepResult& result, const ExperimentPlan& plan);
void emit_results(const SweepResult& result, const ExperimentPlan& plan, ResultFormat format,
                  const std::string& path);

}  // namespace hcran
