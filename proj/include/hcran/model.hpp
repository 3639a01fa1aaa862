#pragma once

#include "hcran/types.hpp"

namespace hcran {

// Shannon rate of one RB: B0 * log2(1 + p*g / (B0*N0)).
double compute_rate(double power_w, double gain, const SystemConfig& cfg);

// Sum of alpha * R over all (k,m,n).
double total_rate(const AllocationSolution& sol, const ChannelState& ch, const SystemConfig& cfg);

// phi_E * sum(alpha * p) + P_Static.
double total_power(const AllocationSolution& sol, const PowerModel& pm);

double energy_efficiency(const AllocationSolution& sol, const ChannelState& ch,
                         const SystemConfig& cfg, const PowerModel& pm);

// Per-UE achieved rates, per-DBS spent powers, and the wireless fronthaul
// rate of a solution. Shared by the solver and the feasibility checker.
struct SolutionSummary {
  std::vector<double> rate_per_ue;
  std::vector<double> rate_per_dbs;
  std::vector<double> power_per_dbs;
  double total_rate = 0.0;
  double transmit_power = 0.0;
  double wireless_rate = 0.0;
};

SolutionSummary summarize(const AllocationSolution& sol, const ChannelState& ch,
                          const Topology& topo, const SystemConfig& cfg);

}  // namespace hcran
