#pragma once

#include <optional>

#include "hcran/solver.hpp"

namespace hcran {

// Conventional-architecture construction knobs. The conventional model keeps
// the CDSA breakdown but restores the fronthaul and per-BS overheads that the
// control/data split removes.
struct ConventionalModelParams {
  double fronthaul_power_ratio = 0.9;  // CDSA fronthaul power / conventional
  double overhead_fraction = 0.28;     // control overhead folded into phi_E
  double baseband_per_bs_w = 2.8;      // per-BS baseband add-back (calibrated once)
};

PowerModel build_power_model(Architecture arch, const SystemConfig& cfg, int num_lpns,
                             const PowerModelBreakdown& breakdown = {},
                             const ConventionalModelParams& conv = {});

// Static fronthaul baseline: same Dinkelbach/dual pipeline, but the pooled C3
// constraint is replaced by per-DBS caps (equal split of the pooled capacity,
// or an explicit per-DBS cap).
std::pair<AllocationSolution, SolverReport> solve_static(
    const ChannelState& ch, const Topology& topo, const SystemConfig& cfg,
    const PowerModel& pm, std::optional<double> explicit_per_dbs_cap_bps = std::nullopt);

struct OracleResult {
  double best_ee = 0.0;
  AllocationSolution best;
  long long instances_searched = 0;
  int power_grid_resolution = 0;
  SolveStatus status = SolveStatus::Infeasible;
};

struct OracleBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  double grid_span_decades = 3.0;  // log-spaced levels below P_m^max
  long long budget = 500'000'000;  // enumeration step budget; exceeding refuses
};

// Exhaustive verification oracle: enumerates every C4-feasible assignment and
// per-assigned-RB powers over a log grid, keeping the best C1-C3 feasible
// candidate by energy efficiency. Refuses (throws) when over budget.
OracleResult brute_force_solve(const ChannelState& ch, const Topology& topo,
                               const SystemConfig& cfg, const PowerModel& pm,
                               int grid_levels, const OracleOptions& opt = {});

}  // namespace hcran
