#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcran {

// Linear-unit convention: everything below is W, Hz, bit/s, or meters.
// dB / dBm values exist only at config-parse time.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

enum class StationKind { LPN, HPN };

enum class Architecture { CDSA, Conventional };

struct StepSchedule {
  // Relative step constants for the diminishing c/sqrt(n) schedule.
  double c_mu = 0.08;
  double c_gamma = 0.25;
  double c_upsilon = 0.12;
  // When >= 0, overrides the schedule with a fixed absolute step (tests).
  double fixed_step = -1.0;
};

struct SystemConfig {
  double total_bandwidth_hz = 10e6;
  int num_rbs = 50;
  double rb_bandwidth_hz = 10e6 / 50;
  double noise_psd_w_per_hz = 3.9810717055349725e-21;  // -174 dBm/Hz
  double phi_e = 0.29;
  double p_static_w = 439.0;
  double fronthaul_cap_bps = 0.8e9;
  double min_rate_bps = 5e6;
  std::vector<double> min_rate_per_ue_bps;  // empty -> uniform min_rate_bps
  double dinkelbach_tol = 1e-4;
  int dinkelbach_max_iters = 30;
  int dual_max_iters = 2000;
  int dual_patience = 200;  // dual iterations without incumbent improvement before exit
  double dual_move_tol = 1e-5;
  double constraint_rel_tol = 1e-3;
  StepSchedule step_schedule;

  double min_rate_for(int k) const {
    return min_rate_per_ue_bps.empty() ? min_rate_bps
                                       : min_rate_per_ue_bps.at(static_cast<std::size_t>(k));
  }
  void validate() const;
};

struct Station {
  StationKind kind = StationKind::LPN;
  double x_m = 0.0;
  double y_m = 0.0;
  double max_power_w = 0.13;
  bool wireless_fronthaul = false;
};

struct Topology {
  std::vector<Station> dbs_list;  // M LPNs followed by the HPN at index M
  std::vector<std::pair<double, double>> ue_list;
  double cell_radius_m = 0.0;  // hexagon circumradius

  int num_dbs() const { return static_cast<int>(dbs_list.size()); }
  int num_ues() const { return static_cast<int>(ue_list.size()); }
  int num_wireless() const;
  void validate() const;
};

// Channel power gains, K x (M+1) x N, stored with UE index innermost so the
// per-(m,n) argmax over UEs walks contiguous memory.
struct ChannelState {
  int num_ues = 0;
  int num_dbs = 0;
  int num_rbs = 0;
  std::vector<double> gains;

  ChannelState() = default;
  ChannelState(int K, int M1, int N)
      : num_ues(K), num_dbs(M1), num_rbs(N),
        gains(static_cast<std::size_t>(K) * M1 * N, 0.0) {}

  double& gain(int k, int m, int n) {
    return gains[(static_cast<std::size_t>(m) * num_rbs + n) * num_ues + k];
  }
  double gain(int k, int m, int n) const {
    return gains[(static_cast<std::size_t>(m) * num_rbs + n) * num_ues + k];
  }
  const double* rb_gains(int m, int n) const {
    return gains.data() + (static_cast<std::size_t>(m) * num_rbs + n) * num_ues;
  }
  void validate() const;
};

struct PowerModelBreakdown {
  double platform_w = 191.2;       // cloud baseband platform
  double fronthaul_w = 87.8;       // fronthaul links
  double hpn_w = 60.0;             // HPN static share
  double per_lpn_w = 5.0;          // per-LPN static share
};

struct PowerModel {
  Architecture architecture = Architecture::CDSA;
  double phi_e = 0.29;
  double p_static_w = 439.0;
  PowerModelBreakdown breakdown;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

// RB ownership representation: owner[m*N+n] is the UE index holding RB n of
// DBS m, or -1 when unassigned. C4 exclusivity holds by construction.
struct AllocationSolution {
  int num_ues = 0;
  int num_dbs = 0;
  int num_rbs = 0;
  std::vector<int> owner;
  std::vector<double> power_w;  // per (m,n); > 0 only where owned

  double ee_bits_per_joule = 0.0;
  std::vector<double> mu;
  std::vector<double> gamma;
  std::vector<double> upsilon;
  int dinkelbach_iters = 0;
  int dual_iters_total = 0;
  double final_f = 0.0;

  AllocationSolution() = default;
  AllocationSolution(int K, int M1, int N)
      : num_ues(K), num_dbs(M1), num_rbs(N),
        owner(static_cast<std::size_t>(M1) * N, -1),
        power_w(static_cast<std::size_t>(M1) * N, 0.0) {}

  int owner_at(int m, int n) const { return owner[static_cast<std::size_t>(m) * num_rbs + n]; }
  double power_at(int m, int n) const { return power_w[static_cast<std::size_t>(m) * num_rbs + n]; }
  bool alpha(int k, int m, int n) const { return owner_at(m, n) == k; }
  void set(int m, int n, int k, double p) {
    owner[static_cast<std::size_t>(m) * num_rbs + n] = k;
    power_w[static_cast<std::size_t>(m) * num_rbs + n] = p;
  }
  void clear_rb(int m, int n) { set(m, n, -1, 0.0); }
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace hcran
