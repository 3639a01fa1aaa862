#include "hcran/model.hpp"

#include <cmath>

namespace hcran {

void SystemConfig::validate() const {
  if (total_bandwidth_hz <= 0 || num_rbs <= 0 || rb_bandwidth_hz <= 0)
    throw InvalidInput("SystemConfig: bandwidth and RB count must be positive");
  if (std::abs(rb_bandwidth_hz * num_rbs - total_bandwidth_hz) >
      1e-9 * total_bandwidth_hz)
    throw InvalidInput("SystemConfig: rb_bandwidth_hz * num_rbs != total_bandwidth_hz");
  if (noise_psd_w_per_hz <= 0) throw InvalidInput("SystemConfig: noise PSD must be positive");
  if (phi_e <= 0 || p_static_w <= 0)
    throw InvalidInput("SystemConfig: phi_e and p_static_w must be positive");
  if (fronthaul_cap_bps <= 0) throw InvalidInput("SystemConfig: fronthaul cap must be positive");
  if (min_rate_bps < 0) throw InvalidInput("SystemConfig: min rate must be nonnegative");
  if (dinkelbach_tol <= 0 || dual_move_tol <= 0 || constraint_rel_tol <= 0)
    throw InvalidInput("SystemConfig: tolerances must be positive");
  if (dual_max_iters <= 0 || dinkelbach_max_iters <= 0)
    throw InvalidInput("SystemConfig: iteration caps must be positive");
}

int Topology::num_wireless() const {
  int n = 0;
  for (const auto& s : dbs_list) n += s.wireless_fronthaul ? 1 : 0;
  return n;
}

void Topology::validate() const {
  if (dbs_list.empty()) throw InvalidInput("Topology: no stations");
  int hpns = 0;
  for (const auto& s : dbs_list) hpns += s.kind == StationKind::HPN ? 1 : 0;
  if (hpns != 1 || dbs_list.back().kind != StationKind::HPN)
    throw InvalidInput("Topology: exactly one HPN required, at the last index");
  for (const auto& s : dbs_list)
    if (s.max_power_w <= 0) throw InvalidInput("Topology: station max power must be positive");
}

void ChannelState::validate() const {
  if (gains.size() != static_cast<std::size_t>(num_ues) * num_dbs * num_rbs)
    throw InvalidInput("ChannelState: size mismatch");
  for (double g : gains)
    if (!(g > 0.0) || !std::isfinite(g))
      throw InvalidInput("ChannelState: gains must be strictly positive and finite");
}

void PowerModel::validate() const {
  if (phi_e <= 0 || p_static_w <= 0)
    throw InvalidInput("PowerModel: phi_e and p_static_w must be positive");
}

double compute_rate(double power_w, double gain, const SystemConfig& cfg) {
  if (!(power_w >= 0.0) || !std::isfinite(power_w))
    throw InvalidInput("compute_rate: power must be finite and nonnegative");
  if (!(gain > 0.0) || !std::isfinite(gain))
    throw InvalidInput("compute_rate: gain must be finite and positive");
  const double b0 = cfg.rb_bandwidth_hz;
  const double snr = power_w * gain / (b0 * cfg.noise_psd_w_per_hz);
  return b0 * std::log2(1.0 + snr);
}

double total_rate(const AllocationSolution& sol, const ChannelState& ch,
                  const SystemConfig& cfg) {
  if (sol.num_ues != ch.num_ues || sol.num_dbs != ch.num_dbs || sol.num_rbs != ch.num_rbs)
    throw InvalidInput("total_rate: shape mismatch");
  double sum = 0.0;
  for (int m = 0; m < sol.num_dbs; ++m)
    for (int n = 0; n < sol.num_rbs; ++n) {
      const int k = sol.owner_at(m, n);
      if (k >= 0) sum += compute_rate(sol.power_at(m, n), ch.gain(k, m, n), cfg);
    }
  return sum;
}

double total_power(const AllocationSolution& sol, const PowerModel& pm) {
  double spent = 0.0;
  for (std::size_t i = 0; i < sol.power_w.size(); ++i) {
    const double p = sol.power_w[i];
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InvalidInput("total_power: powers must be finite and nonnegative");
    if (sol.owner[i] >= 0) spent += p;
  }
  return pm.phi_e * spent + pm.p_static_w;
}

double energy_efficiency(const AllocationSolution& sol, const ChannelState& ch,
                         const SystemConfig& cfg, const PowerModel& pm) {
  return total_rate(sol, ch, cfg) / total_power(sol, pm);
}

SolutionSummary summarize(const AllocationSolution& sol, const ChannelState& ch,
                          const Topology& topo, const SystemConfig& cfg) {
  SolutionSummary s;
  s.rate_per_ue.assign(static_cast<std::size_t>(sol.num_ues), 0.0);
  s.rate_per_dbs.assign(static_cast<std::size_t>(sol.num_dbs), 0.0);
  s.power_per_dbs.assign(static_cast<std::size_t>(sol.num_dbs), 0.0);
  for (int m = 0; m < sol.num_dbs; ++m) {
    for (int n = 0; n < sol.num_rbs; ++n) {
      const int k = sol.owner_at(m, n);
      if (k < 0) continue;
      const double r = compute_rate(sol.power_at(m, n), ch.gain(k, m, n), cfg);
      s.rate_per_ue[static_cast<std::size_t>(k)] += r;
      s.rate_per_dbs[static_cast<std::size_t>(m)] += r;
      s.power_per_dbs[static_cast<std::size_t>(m)] += sol.power_at(m, n);
    }
    s.total_rate += s.rate_per_dbs[static_cast<std::size_t>(m)];
    s.transmit_power += s.power_per_dbs[static_cast<std::size_t>(m)];
    if (topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul)
      s.wireless_rate += s.rate_per_dbs[static_cast<std::size_t>(m)];
  }
  return s;
}

}  // namespace hcran
