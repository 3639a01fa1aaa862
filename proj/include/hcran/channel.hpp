#pragma once

#include <cstdint>
#include <string>

#include "hcran/types.hpp"

namespace hcran {

struct FadingModel {
  bool rayleigh = true;            // unit-mean-power exponential |h|^2 per RB
  bool shadowing = true;
  double shadowing_std_hpn_db = 8.0;
  double shadowing_std_lpn_db = 10.0;
};

struct DropSpec {
  std::uint64_t seed = 1;
  int num_lpns = 20;
  int num_ues = 50;
  int num_wireless_fronthaul = 10;
  double isd_m = 500.0;
  double min_ue_dbs_distance_m = 10.0;
  double hpn_max_power_w = 20.0;
  double lpn_max_power_w = 0.13;
  bool hpn_wireless = false;
  FadingModel fading;

  void validate() const;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// HPN at the cell center, LPNs and UEs uniform over the hexagon, UEs
// resampled until they clear the minimum UE-DBS distance.
Topology generate_topology(const DropSpec& spec);

// 128.1 + 37.6 log10(d_km) for the HPN, 140.7 + 36.7 log10(d_km) for LPNs.
double path_loss_db(StationKind kind, double distance_m);

// g[k][m][n] = 10^(-(PL + S_km)/10) * |h_kmn|^2, fully seeded by the spec.
ChannelState synthesize_channel(const Topology& topo, const DropSpec& spec,
                                const SystemConfig& cfg);

// Drop files: topology plus the full gain tensor, used as regression fixtures.
std::string drop_to_json(const Topology& topo, const ChannelState& ch);
void drop_from_json(const std::string& text, Topology& topo, ChannelState& ch);
void save_drop(const std::string& path, const Topology& topo, const ChannelState& ch);
void load_drop(const std::string& path, Topology& topo, ChannelState& ch);

}  // namespace hcran
