#include "hcran/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hcran {

namespace {

constexpr double kDenomFloor = 1e-9;     // water-level denominator floor at q = 0
constexpr double kUpsilonFloor = 0.05;   // lets upsilon leave zero under the relative schedule

double denom_for(double gamma_m, double q, double phi_e) {
  return std::max(gamma_m + q * phi_e, kDenomFloor);
}

// Precomputed per-solve quantities: noise-normalized inverse gains and their
// logs, so the hot assignment loop is multiply/compare only.
struct AssignContext {
  const ChannelState* ch = nullptr;
  std::vector<double> noise_over_g;
  std::vector<double> log2_noise_over_g;

  AssignContext(const ChannelState& c, const SystemConfig& cfg) : ch(&c) {
    const double b0n0 = cfg.rb_bandwidth_hz * cfg.noise_psd_w_per_hz;
    noise_over_g.resize(c.gains.size());
    log2_noise_over_g.resize(c.gains.size());
    for (std::size_t i = 0; i < c.gains.size(); ++i) {
      noise_over_g[i] = b0n0 / c.gains[i];
      log2_noise_over_g[i] = std::log2(noise_over_g[i]);
    }
  }
};

double fronthaul_cap(const FronthaulPolicy& policy, int m) {
  if (policy.kind == FronthaulPolicy::Kind::Pooled) return policy.pooled_cap_bps;
  return policy.per_dbs_cap_bps[static_cast<std::size_t>(m)];
}

AssignResult assign_rbs_ctx(const AssignContext& ctx, double q, const DualState& duals,
                            const Topology& topo, const SystemConfig& cfg, double phi_e) {
  const ChannelState& ch = *ctx.ch;
  const int K = ch.num_ues, M1 = ch.num_dbs, N = ch.num_rbs;
  const double b0 = cfg.rb_bandwidth_hz;
  const double inv_ln2 = 1.0 / std::numbers::ln2_v<double>;

  AssignResult r{AllocationSolution(K, M1, N), {}};
  r.sum.rate_per_ue.assign(static_cast<std::size_t>(K), 0.0);
  r.sum.rate_per_dbs.assign(static_cast<std::size_t>(M1), 0.0);
  r.sum.power_per_dbs.assign(static_cast<std::size_t>(M1), 0.0);

  std::vector<double> weight(static_cast<std::size_t>(K));
  std::vector<double> log2_weighted_level(static_cast<std::size_t>(K));
  for (int m = 0; m < M1; ++m) {
    const bool wireless = topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul;
    const double ups = wireless ? duals.upsilon_for(m) : 0.0;
    const double denom = denom_for(duals.gamma[static_cast<std::size_t>(m)], q, phi_e);
    const double level = b0 * inv_ln2 / denom;  // water level numerator B0/ln2 / (gamma+q*phi)
    for (int k = 0; k < K; ++k) {
      const double w = 1.0 + duals.mu[static_cast<std::size_t>(k)] - ups;
      weight[static_cast<std::size_t>(k)] = w;
      log2_weighted_level[static_cast<std::size_t>(k)] =
          w > 0.0 ? std::log2(level * w) : 0.0;
    }
    for (int n = 0; n < N; ++n) {
      const std::size_t base = (static_cast<std::size_t>(m) * N + n) * K;
      int best_k = -1;
      double best_h = 0.0, best_p = 0.0, best_rate = 0.0;
      for (int k = 0; k < K; ++k) {
        const double w = weight[static_cast<std::size_t>(k)];
        if (w <= 0.0) continue;
        const double ng = ctx.noise_over_g[base + static_cast<std::size_t>(k)];
        const double p = level * w - ng;
        if (p <= 0.0) continue;
        // rate = B0*log2(1 + p/ng) = B0*(log2(level*w) - log2(ng))
        const double rate =
            b0 * (log2_weighted_level[static_cast<std::size_t>(k)] -
                  ctx.log2_noise_over_g[base + static_cast<std::size_t>(k)]);
        const double h = w * rate - denom * p;
        if (h > best_h) {  // ties keep the lowest UE index
          best_h = h;
          best_k = k;
          best_p = p;
          best_rate = rate;
        }
      }
      if (best_k >= 0) {
        r.sol.set(m, n, best_k, best_p);
        r.sum.rate_per_ue[static_cast<std::size_t>(best_k)] += best_rate;
        r.sum.rate_per_dbs[static_cast<std::size_t>(m)] += best_rate;
        r.sum.power_per_dbs[static_cast<std::size_t>(m)] += best_p;
      }
    }
    r.sum.total_rate += r.sum.rate_per_dbs[static_cast<std::size_t>(m)];
    r.sum.transmit_power += r.sum.power_per_dbs[static_cast<std::size_t>(m)];
    if (wireless) r.sum.wireless_rate += r.sum.rate_per_dbs[static_cast<std::size_t>(m)];
  }
  return r;
}

// Scale factors applied to a DBS's powers, recomputing its rates exactly.
void scale_dbs_power(AllocationSolution& sol, int m, double scale) {
  for (int n = 0; n < sol.num_rbs; ++n) {
    const std::size_t i = static_cast<std::size_t>(m) * sol.num_rbs + n;
    if (sol.owner[i] >= 0) sol.power_w[i] *= scale;
  }
}

double dbs_rate(const AllocationSolution& sol, const ChannelState& ch, int m,
                const SystemConfig& cfg, double scale) {
  double r = 0.0;
  for (int n = 0; n < sol.num_rbs; ++n) {
    const int k = sol.owner_at(m, n);
    if (k >= 0) r += compute_rate(sol.power_at(m, n) * scale, ch.gain(k, m, n), cfg);
  }
  return r;
}

// Largest common scale s in [0,1] over the given DBSs with total rate <= cap.
double bisect_rate_scale(const AllocationSolution& sol, const ChannelState& ch,
                         const std::vector<int>& dbss, const SystemConfig& cfg, double cap) {
  auto rate_at = [&](double s) {
    double r = 0.0;
    for (int m : dbss) r += dbs_rate(sol, ch, m, cfg, s);
    return r;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate_at(mid) <= cap)
      lo = mid;
    else
      hi = mid;
    if (cap - rate_at(lo) < 1e-9 * cap) break;
  }
  return lo;
}

// Move slots from UEs with rate surplus to UEs below their floor, keeping
// each slot's power (C2/C3 totals move only through the slot's rate change).
bool repair_min_rate(AllocationSolution& sol, const ChannelState& ch, const Topology& topo,
                     const SystemConfig& cfg) {
  const int K = sol.num_ues, M1 = sol.num_dbs, N = sol.num_rbs;
  std::vector<double> slot_rate(static_cast<std::size_t>(M1) * N, 0.0);
  std::vector<double> rate_ue(static_cast<std::size_t>(K), 0.0);
  for (int m = 0; m < M1; ++m)
    for (int n = 0; n < N; ++n) {
      const int j = sol.owner_at(m, n);
      if (j < 0) continue;
      const double r = compute_rate(sol.power_at(m, n), ch.gain(j, m, n), cfg);
      slot_rate[static_cast<std::size_t>(m) * N + n] = r;
      rate_ue[static_cast<std::size_t>(j)] += r;
    }

  const int kMaxMoves = 4 * K;
  for (int move = 0; move < kMaxMoves; ++move) {
    int worst_k = -1;
    double worst_deficit = 0.0;
    for (int k = 0; k < K; ++k) {
      const double d = cfg.min_rate_for(k) - rate_ue[static_cast<std::size_t>(k)];
      if (d > worst_deficit) {
        worst_deficit = d;
        worst_k = k;
      }
    }
    if (worst_k < 0) return true;

    int best_m = -1, best_n = -1;
    double best_gain_rate = 0.0;
    for (int m = 0; m < M1; ++m)
      for (int n = 0; n < N; ++n) {
        const std::size_t i = static_cast<std::size_t>(m) * N + n;
        const int j = sol.owner[i];
        if (j < 0 || j == worst_k || sol.power_w[i] <= 0.0) continue;
        const double donor_left = rate_ue[static_cast<std::size_t>(j)] - slot_rate[i];
        if (donor_left < cfg.min_rate_for(j)) continue;
        const double r = compute_rate(sol.power_w[i], ch.gain(worst_k, m, n), cfg);
        if (r > best_gain_rate) {
          best_gain_rate = r;
          best_m = m;
          best_n = n;
        }
      }
    if (best_m < 0) return false;
    const std::size_t i = static_cast<std::size_t>(best_m) * N + best_n;
    rate_ue[static_cast<std::size_t>(sol.owner[i])] -= slot_rate[i];
    sol.owner[i] = worst_k;
    slot_rate[i] = best_gain_rate;
    rate_ue[static_cast<std::size_t>(worst_k)] += best_gain_rate;
  }
  for (int k = 0; k < K; ++k)
    if (rate_ue[static_cast<std::size_t>(k)] < cfg.min_rate_for(k)) return false;
  return true;
}

// Project an iterate onto the feasible region: exact C2 rescale, then a
// bisected common downscale of wireless powers for C3, then slot moves that
// lift UEs below their rate floor.
bool recover_feasible(AllocationSolution& sol, const ChannelState& ch, const Topology& topo,
                      const SystemConfig& cfg, const FronthaulPolicy& policy,
                      SolutionSummary& out_sum) {
  const int M1 = sol.num_dbs;
  for (int m = 0; m < M1; ++m) {
    double spent = 0.0;
    for (int n = 0; n < sol.num_rbs; ++n)
      if (sol.owner_at(m, n) >= 0) spent += sol.power_at(m, n);
    const double pmax = topo.dbs_list[static_cast<std::size_t>(m)].max_power_w;
    if (spent > pmax) scale_dbs_power(sol, m, pmax / spent);
  }
  const double ctol = cfg.constraint_rel_tol;
  auto enforce_c3 = [&]() -> bool {
    bool scaled = false;
    if (policy.kind == FronthaulPolicy::Kind::Pooled) {
      std::vector<int> wireless;
      double wrate = 0.0;
      for (int m = 0; m < M1; ++m)
        if (topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul) {
          wireless.push_back(m);
          wrate += dbs_rate(sol, ch, m, cfg, 1.0);
        }
      if (wrate > policy.pooled_cap_bps) {
        const double s = bisect_rate_scale(sol, ch, wireless, cfg, policy.pooled_cap_bps);
        for (int m : wireless) scale_dbs_power(sol, m, s);
        scaled = true;
      }
    } else {
      for (int m = 0; m < M1; ++m) {
        if (!topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul) continue;
        const double cap = policy.per_dbs_cap_bps[static_cast<std::size_t>(m)];
        if (!std::isfinite(cap)) continue;
        if (dbs_rate(sol, ch, m, cfg, 1.0) > cap) {
          const double s = bisect_rate_scale(sol, ch, {m}, cfg, cap);
          scale_dbs_power(sol, m, s);
          scaled = true;
        }
      }
    }
    return scaled;
  };

  enforce_c3();
  // Repairing C1 can raise a wireless DBS's rate; alternate until both hold.
  bool c1_ok = false;
  for (int round = 0; round < 3; ++round) {
    c1_ok = repair_min_rate(sol, ch, topo, cfg);
    if (!c1_ok) break;
    if (!enforce_c3()) break;
    c1_ok = false;  // scaling may have re-starved someone; re-run the repair
  }
  out_sum = summarize(sol, ch, topo, cfg);
  if (!c1_ok) {
    for (int k = 0; k < sol.num_ues; ++k) {
      const double rmin = cfg.min_rate_for(k);
      if (out_sum.rate_per_ue[static_cast<std::size_t>(k)] < rmin * (1.0 - ctol)) return false;
    }
  }
  return true;
}

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// One-shot estimate of the per-DBS power multiplier scale: the gamma that
// would spread the DBS's full power budget over all N RBs.
std::vector<double> initial_gamma(const AssignContext& ctx, const Topology& topo,
                                  const SystemConfig& cfg, double q, double phi_e) {
  const ChannelState& ch = *ctx.ch;
  const int K = ch.num_ues, M1 = ch.num_dbs, N = ch.num_rbs;
  const double b0_ln2 = cfg.rb_bandwidth_hz / std::numbers::ln2_v<double>;
  std::vector<double> gamma(static_cast<std::size_t>(M1), 0.0);
  for (int m = 0; m < M1; ++m) {
    double noise_sum = 0.0;
    for (int n = 0; n < N; ++n) {
      const std::size_t base = (static_cast<std::size_t>(m) * N + n) * K;
      double best = ctx.noise_over_g[base];
      for (int k = 1; k < K; ++k)
        best = std::min(best, ctx.noise_over_g[base + static_cast<std::size_t>(k)]);
      noise_sum += best;
    }
    const double pmax = topo.dbs_list[static_cast<std::size_t>(m)].max_power_w;
    const double denom_hat = b0_ln2 * N / (pmax + noise_sum);
    gamma[static_cast<std::size_t>(m)] = std::max(0.0, denom_hat - q * phi_e);
  }
  return gamma;
}

}  // namespace

FronthaulPolicy FronthaulPolicy::equal_split(double cap_bps, const Topology& topo) {
  const int w = topo.num_wireless();
  std::vector<double> caps(static_cast<std::size_t>(topo.num_dbs()),
                           std::numeric_limits<double>::infinity());
  if (w > 0) {
    const double per = cap_bps / w;
    for (int m = 0; m < topo.num_dbs(); ++m)
      if (topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul)
        caps[static_cast<std::size_t>(m)] = per;
  }
  return per_dbs(std::move(caps));
}

double waterfill_power(int k, int m, double gain, double q, const DualState& duals,
                       bool wireless, double phi_e, const SystemConfig& cfg) {
  if (!(gain > 0.0)) throw InvalidInput("waterfill_power: gain must be positive");
  const double ups = wireless ? duals.upsilon_for(m) : 0.0;
  const double w = 1.0 + duals.mu.at(static_cast<std::size_t>(k)) - ups;
  if (w <= 0.0) return 0.0;
  const double denom = denom_for(duals.gamma.at(static_cast<std::size_t>(m)), q, phi_e);
  const double b0 = cfg.rb_bandwidth_hz;
  const double level = b0 / std::numbers::ln2_v<double> * w / denom;
  return std::max(0.0, level - b0 * cfg.noise_psd_w_per_hz / gain);
}

AssignResult assign_rbs(const ChannelState& ch, double q, const DualState& duals,
                        const Topology& topo, const SystemConfig& cfg, double phi_e,
                        const FronthaulPolicy& policy) {
  (void)policy;
  AssignContext ctx(ch, cfg);
  return assign_rbs_ctx(ctx, q, duals, topo, cfg, phi_e);
}

DualState subgradient_step(const DualState& duals, const SolutionSummary& sum,
                           const Topology& topo, const SystemConfig& cfg, double phi_e,
                           double q, const FronthaulPolicy& policy) {
  DualState next = duals;
  next.iter = duals.iter + 1;
  const int t = next.iter;
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const StepSchedule& ss = cfg.step_schedule;
  const bool fixed = ss.fixed_step >= 0.0;
  const double b0 = cfg.rb_bandwidth_hz;

  for (std::size_t k = 0; k < duals.mu.size(); ++k) {
    const double rmin = cfg.min_rate_for(static_cast<int>(k));
    const double grad = sum.rate_per_ue[k] - rmin;
    double step;
    if (fixed) {
      step = ss.fixed_step;
      next.mu[k] = std::max(0.0, duals.mu[k] - step * grad);
    } else {
      const double rref = std::max(rmin, b0);
      const double ghat = clamp(grad / rref, -1.0, 1.0);
      step = ss.c_mu * (1.0 + duals.mu[k]) / sqrt_t;
      next.mu[k] = std::max(0.0, duals.mu[k] - step * ghat);
    }
  }

  for (std::size_t m = 0; m < duals.gamma.size(); ++m) {
    const double pmax = topo.dbs_list[m].max_power_w;
    const double grad = pmax - sum.power_per_dbs[m];
    if (fixed) {
      next.gamma[m] = std::max(0.0, duals.gamma[m] - ss.fixed_step * grad);
    } else {
      const double ghat = clamp(grad / pmax, -10.0, 1.0);
      const double step = ss.c_gamma * (duals.gamma[m] + q * phi_e + kDenomFloor) / sqrt_t;
      next.gamma[m] = std::max(0.0, duals.gamma[m] - step * ghat);
    }
  }

  if (policy.kind == FronthaulPolicy::Kind::Pooled) {
    const double cap = policy.pooled_cap_bps;
    const double grad = cap - sum.wireless_rate;
    if (fixed) {
      next.upsilon[0] = std::max(0.0, duals.upsilon[0] - ss.fixed_step * grad);
    } else {
      const double ghat = clamp(grad / cap, -10.0, 1.0);
      const double step = ss.c_upsilon * (duals.upsilon[0] + kUpsilonFloor) / sqrt_t;
      next.upsilon[0] = std::max(0.0, duals.upsilon[0] - step * ghat);
    }
  } else {
    for (std::size_t m = 0; m < duals.upsilon.size(); ++m) {
      if (!topo.dbs_list[m].wireless_fronthaul) continue;
      const double cap = policy.per_dbs_cap_bps[m];
      if (!std::isfinite(cap)) continue;
      const double grad = cap - sum.rate_per_dbs[m];
      if (fixed) {
        next.upsilon[m] = std::max(0.0, duals.upsilon[m] - ss.fixed_step * grad);
      } else {
        const double ghat = clamp(grad / cap, -10.0, 1.0);
        const double step = ss.c_upsilon * (duals.upsilon[m] + kUpsilonFloor) / sqrt_t;
        next.upsilon[m] = std::max(0.0, duals.upsilon[m] - step * ghat);
      }
    }
  }
  return next;
}

FeasibilityReport check_feasibility(const AllocationSolution& sol, const ChannelState& ch,
                                    const Topology& topo, const SystemConfig& cfg,
                                    const FronthaulPolicy& policy) {
  FeasibilityReport rep;
  const SolutionSummary sum = summarize(sol, ch, topo, cfg);
  const double ctol = cfg.constraint_rel_tol;
  bool ok = true;

  for (int k = 0; k < sol.num_ues; ++k) {
    const double rmin = cfg.min_rate_for(k);
    const double slack = sum.rate_per_ue[static_cast<std::size_t>(k)] - rmin;
    rep.c1_slack_bps.push_back(slack);
    if (slack < -ctol * std::max(rmin, 1.0)) ok = false;
  }
  for (int m = 0; m < sol.num_dbs; ++m) {
    const double pmax = topo.dbs_list[static_cast<std::size_t>(m)].max_power_w;
    const double slack = pmax - sum.power_per_dbs[static_cast<std::size_t>(m)];
    rep.c2_slack_w.push_back(slack);
    if (slack < -ctol * pmax) ok = false;
  }
  if (policy.kind == FronthaulPolicy::Kind::Pooled) {
    const double slack = policy.pooled_cap_bps - sum.wireless_rate;
    rep.c3_slack_bps.push_back(slack);
    if (slack < -ctol * policy.pooled_cap_bps) ok = false;
  } else {
    for (int m = 0; m < sol.num_dbs; ++m) {
      if (!topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul) continue;
      const double cap = policy.per_dbs_cap_bps[static_cast<std::size_t>(m)];
      if (!std::isfinite(cap)) continue;
      const double slack = cap - sum.rate_per_dbs[static_cast<std::size_t>(m)];
      rep.c3_slack_bps.push_back(slack);
      if (slack < -ctol * cap) ok = false;
    }
  }
  // C4: power only on owned slots (exclusivity holds by representation).
  for (std::size_t i = 0; i < sol.power_w.size(); ++i)
    if (sol.owner[i] < 0 && sol.power_w[i] != 0.0) rep.c4_ok = false;
  if (!rep.c4_ok) ok = false;
  rep.feasible = ok;
  return rep;
}

DualSolveResult solve_dual(const ChannelState& ch, double q, const Topology& topo,
                           const SystemConfig& cfg, const PowerModel& pm,
                           const FronthaulPolicy& policy, const DualState* warm_start,
                           const AllocationSolution* incumbent) {
  if (q < 0) throw InvalidInput("solve_dual: q must be nonnegative");
  const int K = ch.num_ues, M1 = ch.num_dbs;
  AssignContext ctx(ch, cfg);

  DualSolveResult res;
  if (warm_start) {
    res.duals = *warm_start;
    res.duals.iter = 0;
  } else {
    res.duals.mu.assign(static_cast<std::size_t>(K), 0.0);
    res.duals.gamma = initial_gamma(ctx, topo, cfg, q, pm.phi_e);
    res.duals.upsilon.assign(
        policy.kind == FronthaulPolicy::Kind::Pooled ? 1 : static_cast<std::size_t>(M1), 0.0);
  }

  int last_improve = 0;
  auto consider = [&](const AllocationSolution& sol, const SolutionSummary& sum, int iter) {
    const double p_total = pm.phi_e * sum.transmit_power + pm.p_static_w;
    const double obj = sum.total_rate - q * p_total;
    if (!res.found_feasible || obj > res.best_obj) {
      res.best = sol;
      res.best_sum = sum;
      res.best_obj = obj;
      res.found_feasible = true;
      last_improve = iter;
    }
  };

  if (incumbent) {
    SolutionSummary sum = summarize(*incumbent, ch, topo, cfg);
    const FeasibilityReport rep = check_feasibility(*incumbent, ch, topo, cfg, policy);
    if (rep.feasible) consider(*incumbent, sum, 0);
  }

  int calm_iters = 0;
  for (int t = 0; t < cfg.dual_max_iters; ++t) {
    AssignResult ar = assign_rbs_ctx(ctx, q, res.duals, topo, cfg, pm.phi_e);

    AllocationSolution recovered = ar.sol;
    SolutionSummary rec_sum;
    if (recover_feasible(recovered, ch, topo, cfg, policy, rec_sum))
      consider(recovered, rec_sum, t);

    DualState next = subgradient_step(res.duals, ar.sum, topo, cfg, pm.phi_e, q, policy);
    double move = 0.0;
    for (std::size_t k = 0; k < next.mu.size(); ++k)
      move = std::max(move, std::abs(next.mu[k] - res.duals.mu[k]) / (1.0 + res.duals.mu[k]));
    for (std::size_t m = 0; m < next.gamma.size(); ++m)
      move = std::max(move, std::abs(next.gamma[m] - res.duals.gamma[m]) /
                                (res.duals.gamma[m] + q * pm.phi_e + kDenomFloor));
    for (std::size_t m = 0; m < next.upsilon.size(); ++m)
      move = std::max(move, std::abs(next.upsilon[m] - res.duals.upsilon[m]) /
                                (res.duals.upsilon[m] + kUpsilonFloor));
    res.duals = next;
    res.iters = t + 1;
    calm_iters = move < cfg.dual_move_tol ? calm_iters + 1 : 0;
    if (calm_iters >= 3) break;
    if (res.found_feasible && t - last_improve > cfg.dual_patience) break;
  }
  return res;
}

std::pair<AllocationSolution, SolverReport> solve_ee(
    const ChannelState& ch, const Topology& topo, const SystemConfig& cfg,
    const PowerModel& pm, const FronthaulPolicy& policy,
    const AllocationSolution* incumbent) {
  cfg.validate();
  topo.validate();
  ch.validate();
  pm.validate();

  SolverReport report;
  AllocationSolution best(ch.num_ues, ch.num_dbs, ch.num_rbs);
  bool have_best = false;
  DualState warm;
  bool have_warm = false;
  double q = 0.0;
  int dual_iters_total = 0;

  for (int it = 0; it < cfg.dinkelbach_max_iters; ++it) {
    const AllocationSolution* inc = have_best ? &best : incumbent;
    DualSolveResult res = solve_dual(ch, q, topo, cfg, pm, policy,
                                     have_warm ? &warm : nullptr, inc);
    warm = res.duals;
    have_warm = true;
    report.dual_iters.push_back(res.iters);
    dual_iters_total += res.iters;
    if (!res.found_feasible) {
      report.status = SolveStatus::Infeasible;
      break;
    }
    best = res.best;
    have_best = true;
    const double rate = res.best_sum.total_rate;
    const double power = pm.phi_e * res.best_sum.transmit_power + pm.p_static_w;
    const double f = rate - q * power;
    q = rate / power;
    report.q_trace.push_back(q);
    report.f_trace.push_back(f);
    report.final_f = f;
    if (std::abs(f) < cfg.dinkelbach_tol * power) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (it + 1 == cfg.dinkelbach_max_iters) report.status = SolveStatus::MaxIters;
  }

  if (have_best) {
    best.ee_bits_per_joule = q;
    best.mu = warm.mu;
    best.gamma = warm.gamma;
    best.upsilon = warm.upsilon;
    best.dinkelbach_iters = static_cast<int>(report.q_trace.size());
    best.dual_iters_total = dual_iters_total;
    best.final_f = report.final_f;
    const FeasibilityReport rep = check_feasibility(best, ch, topo, cfg, policy);
    report.c1_slack = rep.c1_slack_bps;
    report.c2_slack = rep.c2_slack_w;
    report.c3_slack = rep.c3_slack_bps;
  }
  return {best, report};
}

std::pair<AllocationSolution, SolverReport> solve_ee(const ChannelState& ch,
                                                     const Topology& topo,
                                                     const SystemConfig& cfg,
                                                     const PowerModel& pm) {
  return solve_ee(ch, topo, cfg, pm, FronthaulPolicy::pooled(cfg.fronthaul_cap_bps), nullptr);
}

}  // namespace hcran
