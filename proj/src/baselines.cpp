#include "hcran/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hcran {

namespace {

std::vector<double> power_grid(double pmax, int levels, double span_decades, int num_rbs) {
  if (levels < 1) throw InvalidInput("oracle: grid_levels must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(levels));
  if (levels == 1) {
    g[0] = pmax;
    return g;
  }
  for (int j = 0; j < levels; ++j)
    g[static_cast<std::size_t>(j)] =
        pmax * std::pow(10.0, -span_decades * (levels - 1 - j) / (levels - 1));
  // Snap the nearest levels onto the exact equal splits pmax/j so that a
  // power-saturated DBS can spread its full budget without quantization loss.
  for (int j = 2; j <= num_rbs && j < levels; ++j) {
    const double v = pmax / j;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = std::abs(std::log(g[i] / v));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    g[best] = v;
  }
  std::sort(g.begin(), g.end());
  return g;
}

// One candidate power profile for a single DBS: which UE owns each RB and at
// which grid level, plus its aggregate rate and transmit power.
struct DbsCandidate {
  std::vector<int> owner;   // size N, -1 unassigned
  std::vector<int> level;   // size N, -1 unassigned
  std::vector<double> rate_per_ue;
  double rate = 0.0;
  double power = 0.0;
};

// Enumerates every (assignment-row x power-combo) candidate of one DBS,
// pruning branches that exceed the power cap (C2) or, when requested, the
// fronthaul cap (rates only grow along the recursion).
class DbsEnumerator {
 public:
  DbsEnumerator(const ChannelState& ch, const SystemConfig& cfg, int m, double pmax,
                const std::vector<double>& levels, bool cap_rate, double rate_cap)
      : K_(ch.num_ues), N_(ch.num_rbs), L_(static_cast<int>(levels.size())), m_(m),
        pmax_(pmax), levels_(levels), cap_rate_(cap_rate), rate_cap_(rate_cap) {
    rate_tab_.resize(static_cast<std::size_t>(N_) * K_ * L_);
    for (int n = 0; n < N_; ++n)
      for (int k = 0; k < K_; ++k)
        for (int j = 0; j < L_; ++j)
          rate_tab_[idx(n, k, j)] =
              compute_rate(levels_[static_cast<std::size_t>(j)], ch.gain(k, m, n), cfg);
  }

  template <class Visit>
  void run(long long& counter, long long budget, Visit&& visit) {
    DbsCandidate cand;
    cand.owner.assign(static_cast<std::size_t>(N_), -1);
    cand.level.assign(static_cast<std::size_t>(N_), -1);
    cand.rate_per_ue.assign(static_cast<std::size_t>(K_), 0.0);
    recurse(0, cand, counter, budget, visit);
  }

 private:
  std::size_t idx(int n, int k, int j) const {
    return (static_cast<std::size_t>(n) * K_ + k) * L_ + j;
  }

  template <class Visit>
  void recurse(int n, DbsCandidate& cand, long long& counter, long long budget,
               Visit&& visit) {
    if (n == N_) {
      if (++counter > budget)
        throw OracleBudgetError("brute_force_solve: enumeration budget exceeded");
      visit(cand);
      return;
    }
    recurse(n + 1, cand, counter, budget, visit);  // RB left unassigned
    for (int k = 0; k < K_; ++k) {
      for (int j = 0; j < L_; ++j) {
        const double p = levels_[static_cast<std::size_t>(j)];
        if (cand.power + p > pmax_ * (1.0 + 1e-12)) break;  // levels ascend
        const double r = rate_tab_[idx(n, k, j)];
        if (cap_rate_ && cand.rate + r > rate_cap_) break;  // rates ascend in j
        cand.owner[static_cast<std::size_t>(n)] = k;
        cand.level[static_cast<std::size_t>(n)] = j;
        cand.power += p;
        cand.rate += r;
        cand.rate_per_ue[static_cast<std::size_t>(k)] += r;
        recurse(n + 1, cand, counter, budget, visit);
        cand.owner[static_cast<std::size_t>(n)] = -1;
        cand.level[static_cast<std::size_t>(n)] = -1;
        cand.power -= p;
        cand.rate -= r;
        cand.rate_per_ue[static_cast<std::size_t>(k)] -= r;
      }
    }
  }

  int K_, N_, L_, m_;
  double pmax_;
  const std::vector<double>& levels_;
  bool cap_rate_;
  double rate_cap_;
  std::vector<double> rate_tab_;
};

AllocationSolution candidates_to_solution(const std::vector<DbsCandidate>& per_dbs,
                                          const ChannelState& ch,
                                          const std::vector<std::vector<double>>& grids) {
  AllocationSolution sol(ch.num_ues, ch.num_dbs, ch.num_rbs);
  for (int m = 0; m < ch.num_dbs; ++m)
    for (int n = 0; n < ch.num_rbs; ++n) {
      const auto& c = per_dbs[static_cast<std::size_t>(m)];
      if (c.owner[static_cast<std::size_t>(n)] >= 0)
        sol.set(m, n, c.owner[static_cast<std::size_t>(n)],
                grids[static_cast<std::size_t>(m)]
                     [static_cast<std::size_t>(c.level[static_cast<std::size_t>(n)])]);
    }
  return sol;
}

}  // namespace

PowerModel build_power_model(Architecture arch, const SystemConfig& cfg, int num_lpns,
                             const PowerModelBreakdown& bd,
                             const ConventionalModelParams& conv) {
  PowerModel pm;
  pm.architecture = arch;
  pm.breakdown = bd;
  const double cdsa_static =
      bd.platform_w + bd.fronthaul_w + bd.hpn_w + bd.per_lpn_w * num_lpns;
  if (arch == Architecture::CDSA) {
    pm.phi_e = cfg.phi_e;
    pm.p_static_w = cdsa_static;
  } else {
    pm.phi_e = cfg.phi_e / (1.0 - conv.overhead_fraction);
    pm.p_static_w = bd.platform_w + bd.fronthaul_w / conv.fronthaul_power_ratio +
                    bd.hpn_w + bd.per_lpn_w * num_lpns +
                    conv.baseband_per_bs_w * (num_lpns + 1);
  }
  pm.validate();
  return pm;
}

std::pair<AllocationSolution, SolverReport> solve_static(
    const ChannelState& ch, const Topology& topo, const SystemConfig& cfg,
    const PowerModel& pm, std::optional<double> explicit_per_dbs_cap_bps) {
  FronthaulPolicy policy;
  if (explicit_per_dbs_cap_bps) {
    std::vector<double> caps(static_cast<std::size_t>(topo.num_dbs()),
                             std::numeric_limits<double>::infinity());
    for (int m = 0; m < topo.num_dbs(); ++m)
      if (topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul)
        caps[static_cast<std::size_t>(m)] = *explicit_per_dbs_cap_bps;
    policy = FronthaulPolicy::per_dbs(std::move(caps));
  } else {
    policy = FronthaulPolicy::equal_split(cfg.fronthaul_cap_bps, topo);
  }
  return solve_ee(ch, topo, cfg, pm, policy, nullptr);
}

OracleResult brute_force_solve(const ChannelState& ch, const Topology& topo,
                               const SystemConfig& cfg, const PowerModel& pm,
                               int grid_levels, const OracleOptions& opt) {
  ch.validate();
  topo.validate();
  pm.validate();
  const int K = ch.num_ues, M1 = ch.num_dbs, N = ch.num_rbs;

  OracleResult result;
  result.power_grid_resolution = grid_levels;

  std::vector<std::vector<double>> grids(static_cast<std::size_t>(M1));
  std::vector<int> wireless;
  for (int m = 0; m < M1; ++m) {
    grids[static_cast<std::size_t>(m)] =
        power_grid(topo.dbs_list[static_cast<std::size_t>(m)].max_power_w, grid_levels,
                   opt.grid_span_decades, N);
    if (topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul) wireless.push_back(m);
  }

  bool rmin_free = true;
  for (int k = 0; k < K; ++k) rmin_free &= cfg.min_rate_for(k) == 0.0;

  long long counter = 0;

  if (rmin_free && wireless.size() <= 1) {
    // Ratio maximization over the finite candidate set: parametric scans,
    // each an exhaustive per-DBS enumeration at fixed q. The per-DBS
    // fronthaul filter is exact here since at most one DBS is wireless.
    std::vector<DbsEnumerator> enums;
    enums.reserve(static_cast<std::size_t>(M1));
    for (int m = 0; m < M1; ++m) {
      const bool wl = topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul;
      enums.emplace_back(ch, cfg, m, topo.dbs_list[static_cast<std::size_t>(m)].max_power_w,
                         grids[static_cast<std::size_t>(m)], wl, cfg.fronthaul_cap_bps);
    }

    double q = 0.0;
    std::vector<DbsCandidate> best_per_dbs(static_cast<std::size_t>(M1));
    long long searched_first_pass = 0;
    for (int iter = 0; iter < 200; ++iter) {
      double f = -q * pm.p_static_w;
      for (int m = 0; m < M1; ++m) {
        double best_score = 0.0;  // the empty candidate scores 0
        DbsCandidate best_cand;
        best_cand.owner.assign(static_cast<std::size_t>(N), -1);
        best_cand.level.assign(static_cast<std::size_t>(N), -1);
        best_cand.rate_per_ue.assign(static_cast<std::size_t>(K), 0.0);
        enums[static_cast<std::size_t>(m)].run(
            counter, opt.budget, [&](const DbsCandidate& c) {
              const double score = c.rate - q * pm.phi_e * c.power;
              if (score > best_score) {
                best_score = score;
                best_cand = c;
              }
            });
        best_per_dbs[static_cast<std::size_t>(m)] = std::move(best_cand);
        f += best_score;
      }
      if (iter == 0) searched_first_pass = counter;
      double rate = 0.0, power = 0.0;
      for (const auto& c : best_per_dbs) {
        rate += c.rate;
        power += c.power;
      }
      const double p_total = pm.phi_e * power + pm.p_static_w;
      if (f <= 1e-10 * q * p_total + 1e-12) {
        result.best = candidates_to_solution(best_per_dbs, ch, grids);
        result.best_ee = rate / p_total;
        result.best.ee_bits_per_joule = result.best_ee;
        result.status = SolveStatus::Converged;
        result.instances_searched = searched_first_pass;
        return result;
      }
      q = rate / p_total;
    }
    throw std::runtime_error("brute_force_solve: parametric search failed to settle");
  }

  // General path: full Cartesian product across DBS candidate sets with
  // explicit C1/C3 leaf checks. Only viable for tiny instances; the budget
  // guard refuses anything larger.
  std::vector<std::vector<DbsCandidate>> cands(static_cast<std::size_t>(M1));
  for (int m = 0; m < M1; ++m) {
    DbsEnumerator e(ch, cfg, m, topo.dbs_list[static_cast<std::size_t>(m)].max_power_w,
                    grids[static_cast<std::size_t>(m)], false, 0.0);
    e.run(counter, opt.budget, [&](const DbsCandidate& c) {
      cands[static_cast<std::size_t>(m)].push_back(c);
    });
  }
  long long product = 1;
  for (const auto& v : cands) {
    product *= static_cast<long long>(v.size());
    if (product > opt.budget)
      throw OracleBudgetError("brute_force_solve: candidate product exceeds budget");
  }

  const double ctol = cfg.constraint_rel_tol;
  std::vector<const DbsCandidate*> pick(static_cast<std::size_t>(M1));
  double best_ee = -1.0;
  std::vector<DbsCandidate> best_pick;
  std::function<void(int)> rec = [&](int m) {
    if (m == M1) {
      ++result.instances_searched;
      double rate = 0.0, power = 0.0, wrate = 0.0;
      std::vector<double> per_ue(static_cast<std::size_t>(K), 0.0);
      for (int i = 0; i < M1; ++i) {
        const DbsCandidate& c = *pick[static_cast<std::size_t>(i)];
        rate += c.rate;
        power += c.power;
        if (topo.dbs_list[static_cast<std::size_t>(i)].wireless_fronthaul) wrate += c.rate;
        for (int k = 0; k < K; ++k)
          per_ue[static_cast<std::size_t>(k)] += c.rate_per_ue[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < K; ++k)
        if (per_ue[static_cast<std::size_t>(k)] < cfg.min_rate_for(k) * (1.0 - ctol)) return;
      if (wrate > cfg.fronthaul_cap_bps * (1.0 + ctol)) return;
      const double ee = rate / (pm.phi_e * power + pm.p_static_w);
      if (ee > best_ee) {
        best_ee = ee;
        best_pick.clear();
        for (auto* p : pick) best_pick.push_back(*p);
      }
      return;
    }
    for (const auto& c : cands[static_cast<std::size_t>(m)]) {
      pick[static_cast<std::size_t>(m)] = &c;
      rec(m + 1);
    }
  };
  rec(0);

  if (best_ee < 0.0) {
    result.status = SolveStatus::Infeasible;
    result.best = AllocationSolution(K, M1, N);
    return result;
  }
  result.best = candidates_to_solution(best_pick, ch, grids);
  result.best_ee = best_ee;
  result.best.ee_bits_per_joule = best_ee;
  result.status = SolveStatus::Converged;
  return result;
}

}  // namespace hcran
