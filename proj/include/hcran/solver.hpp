#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hcran/model.hpp"
#include "hcran/types.hpp"

namespace hcran {

// Fronthaul constraint shape. Pooled: one shared capacity across all
// wireless DBSs (constraint C3). PerDbs: an individual cap per wireless DBS,
// used by the static baseline.
struct FronthaulPolicy {
  enum class Kind { Pooled, PerDbs };
  Kind kind = Kind::Pooled;
  double pooled_cap_bps = 0.8e9;
  std::vector<double> per_dbs_cap_bps;  // size M+1; ignored for wired DBSs

  static FronthaulPolicy pooled(double cap_bps) {
    return FronthaulPolicy{Kind::Pooled, cap_bps, {}};
  }
  static FronthaulPolicy per_dbs(std::vector<double> caps) {
    return FronthaulPolicy{Kind::PerDbs, 0.0, std::move(caps)};
  }
  // Equal split of a pooled capacity over the topology's wireless DBSs.
  static FronthaulPolicy equal_split(double cap_bps, const Topology& topo);
};

struct DualState {
  std::vector<double> mu;       // length K
  std::vector<double> gamma;    // length M+1
  std::vector<double> upsilon;  // length 1 (pooled) or M+1 (per-DBS)
  int iter = 0;

  double upsilon_for(int m) const {
    return upsilon.size() == 1 ? upsilon[0] : upsilon[static_cast<std::size_t>(m)];
  }
};

struct SolverReport {
  std::vector<double> q_trace;
  std::vector<double> f_trace;
  std::vector<int> dual_iters;
  SolveStatus status = SolveStatus::Infeasible;
  double final_f = 0.0;
  std::vector<double> c1_slack, c2_slack, c3_slack;
};

struct FeasibilityReport {
  std::vector<double> c1_slack_bps;   // per UE, rate_k - r_k_min
  std::vector<double> c2_slack_w;     // per DBS, P_max - spent
  std::vector<double> c3_slack_bps;   // pooled: size 1; per-DBS: one per wireless DBS
  bool c4_ok = true;
  bool feasible = false;
};

// Multi-level water filling for one (k,m,n) triple.
double waterfill_power(int k, int m, double gain, double q, const DualState& duals,
                       bool wireless, double phi_e, const SystemConfig& cfg);

// Per-RB decomposed assignment: for every (m,n) slot, water-fill each UE,
// score with the H metric, and hand the slot to the positive argmax (lowest
// UE index on ties). Returns the solution plus its summary in one pass.
struct AssignResult {
  AllocationSolution sol;
  SolutionSummary sum;
};
AssignResult assign_rbs(const ChannelState& ch, double q, const DualState& duals,
                        const Topology& topo, const SystemConfig& cfg, double phi_e,
                        const FronthaulPolicy& policy);

// Projected subgradient update of (mu, gamma, upsilon); increments iter.
DualState subgradient_step(const DualState& duals, const SolutionSummary& sum,
                           const Topology& topo, const SystemConfig& cfg, double phi_e,
                           double q, const FronthaulPolicy& policy);

FeasibilityReport check_feasibility(const AllocationSolution& sol, const ChannelState& ch,
                                    const Topology& topo, const SystemConfig& cfg,
                                    const FronthaulPolicy& policy);

struct DualSolveResult {
  AllocationSolution best;       // best primal-feasible iterate
  SolutionSummary best_sum;
  bool found_feasible = false;
  double best_obj = -std::numeric_limits<double>::infinity();  // R - q * P_T
  DualState duals;
  int iters = 0;
};

DualSolveResult solve_dual(const ChannelState& ch, double q, const Topology& topo,
                           const SystemConfig& cfg, const PowerModel& pm,
                           const FronthaulPolicy& policy,
                           const DualState* warm_start = nullptr,
                           const AllocationSolution* incumbent = nullptr);

std::pair<AllocationSolution, SolverReport> solve_ee(
    const ChannelState& ch, const Topology& topo, const SystemConfig& cfg,
    const PowerModel& pm, const FronthaulPolicy& policy,
    const AllocationSolution* incumbent = nullptr);

// Pooled-C3 convenience overload.
std::pair<AllocationSolution, SolverReport> solve_ee(const ChannelState& ch,
                                                     const Topology& topo,
                                                     const SystemConfig& cfg,
                                                     const PowerModel& pm);

}  // namespace hcran
