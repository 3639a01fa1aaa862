#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hcran/channel.hpp"
#include "hcran/solver.hpp"

using namespace hcran;

namespace {

SystemConfig small_cfg(int num_rbs) {
  SystemConfig cfg;
  cfg.num_rbs = num_rbs;
  cfg.total_bandwidth_hz = num_rbs * cfg.rb_bandwidth_hz;
  cfg.min_rate_bps = 0.0;
  return cfg;
}

Topology two_dbs_topology(bool lpn_wireless) {
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station lpn;
  lpn.kind = StationKind::LPN;
  lpn.max_power_w = 0.13;
  lpn.wireless_fronthaul = lpn_wireless;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 20.0;
  topo.dbs_list = {lpn, hpn};
  topo.ue_list = {{50.0, 0.0}, {-80.0, 10.0}, {120.0, -40.0}};
  return topo;
}

DualState make_duals(std::vector<double> mu, std::vector<double> gamma,
                     std::vector<double> upsilon) {
  DualState d;
  d.mu = std::move(mu);
  d.gamma = std::move(gamma);
  d.upsilon = std::move(upsilon);
  return d;
}

}  // namespace

TEST_CASE("waterfill clamps and limits") {
  const SystemConfig cfg = small_cfg(3);
  const DualState d = make_duals({0.0}, {0.0, 0.0}, {0.0});
  // tiny gain: water level below the noise floor term
  CHECK(waterfill_power(0, 0, 1e-25, 1e6, d, false, 0.29, cfg) == 0.0);
  // q*phi_e = B0/ln2 and g -> inf gives p -> 1 W
  const double q = cfg.rb_bandwidth_hz / std::numbers::ln2_v<double>;
  CHECK(waterfill_power(0, 0, 1e30, q, d, false, 1.0, cfg) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("waterfill monotone in mu") {
  const SystemConfig cfg = small_cfg(3);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ug(1e-13, 1e-8), uq(1e5, 1e7), um(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = ug(rng), q = uq(rng), mu = um(rng);
    const DualState d1 = make_duals({mu}, {0.0, 0.0}, {0.0});
    const DualState d2 = make_duals({2.0 * mu + 0.1}, {0.0, 0.0}, {0.0});
    const double p1 = waterfill_power(0, 0, g, q, d1, false, 0.29, cfg);
    const double p2 = waterfill_power(0, 0, g, q, d2, false, 0.29, cfg);
    if (p1 > 0.0) CHECK(p2 > p1);
  }
}

TEST_CASE("upsilon acts only on wireless DBSs") {
  const SystemConfig cfg = small_cfg(3);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ug(1e-13, 1e-8), uq(1e5, 1e7), uu(0.0, 0.9);
  for (int i = 0; i < 1000; ++i) {
    const double g = ug(rng), q = uq(rng), u = uu(rng);
    const DualState lo = make_duals({0.5}, {0.0, 0.0}, {u});
    const DualState hi = make_duals({0.5}, {0.0, 0.0}, {u + 0.3});
    CHECK(waterfill_power(0, 0, g, q, hi, true, 0.29, cfg) <=
          waterfill_power(0, 0, g, q, lo, true, 0.29, cfg));
    CHECK(waterfill_power(0, 0, g, q, hi, false, 0.29, cfg) ==
          waterfill_power(0, 0, g, q, lo, false, 0.29, cfg));
  }
}

TEST_CASE("assign_rbs matches per-slot H enumeration") {
  const SystemConfig cfg = small_cfg(2);
  const Topology topo = two_dbs_topology(true);
  const FronthaulPolicy policy = FronthaulPolicy::pooled(1e9);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ug(1e-13, 1e-8), um(0.0, 1.0), ugam(0.0, 1e6),
      uu(0.0, 0.8), uq(1e5, 1e7), uc(0.1, 10.0);
  const double phi_e = 0.29;
  const int K = 3, M1 = 2, N = 2;

  for (int rep = 0; rep < 1000; ++rep) {
    ChannelState ch(K, M1, N);
    for (auto& g : ch.gains) g = ug(rng);
    const DualState d =
        make_duals({um(rng), um(rng), um(rng)}, {ugam(rng), ugam(rng)}, {uu(rng)});
    const double q = uq(rng);
    const AssignResult r = assign_rbs(ch, q, d, topo, cfg, phi_e, policy);

    for (int m = 0; m < M1; ++m) {
      const bool wireless = topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul;
      const double denom = std::max(d.gamma[static_cast<std::size_t>(m)] + q * phi_e, 1e-9);
      for (int n = 0; n < N; ++n) {
        double best_h = 0.0;
        int best_k = -1;
        std::vector<double> hs(K);
        for (int k = 0; k < K; ++k) {
          const double w =
              1.0 + d.mu[static_cast<std::size_t>(k)] - (wireless ? d.upsilon[0] : 0.0);
          const double p = waterfill_power(k, m, ch.gain(k, m, n), q, d, wireless, phi_e, cfg);
          const double rate = compute_rate(p, ch.gain(k, m, n), cfg);
          hs[static_cast<std::size_t>(k)] = w * rate - denom * p;
          if (hs[static_cast<std::size_t>(k)] > best_h) {
            best_h = hs[static_cast<std::size_t>(k)];
            best_k = k;
          }
        }
        const int got = r.sol.owner_at(m, n);
        if (best_k < 0) {
          CHECK(got == -1);
          CHECK(r.sol.power_at(m, n) == 0.0);
        } else {
          REQUIRE(got >= 0);
          // allow fp near-ties: the chosen UE's H must equal the max H
          CHECK(hs[static_cast<std::size_t>(got)] ==
                doctest::Approx(best_h).epsilon(1e-9));
          const double p_expect =
              waterfill_power(got, m, ch.gain(got, m, n), q, d, wireless, phi_e, cfg);
          CHECK(r.sol.power_at(m, n) == doctest::Approx(p_expect).epsilon(1e-9));
        }
        // argmax invariance under positive scaling of all H values
        const double c = uc(rng);
        int best_k2 = -1;
        double best_h2 = 0.0;
        for (int k = 0; k < K; ++k)
          if (c * hs[static_cast<std::size_t>(k)] > best_h2) {
            best_h2 = c * hs[static_cast<std::size_t>(k)];
            best_k2 = k;
          }
        CHECK(best_k2 == best_k);
      }
    }
  }
}

TEST_CASE("assignment is exclusive and binary by construction") {
  DropSpec spec;
  spec.seed = 31;
  spec.num_lpns = 3;
  spec.num_ues = 6;
  spec.num_wireless_fronthaul = 2;
  SystemConfig cfg = small_cfg(4);
  const Topology topo = generate_topology(spec);
  const ChannelState ch = synthesize_channel(topo, spec, cfg);
  const DualState d = make_duals(std::vector<double>(6, 0.2),
                                 std::vector<double>(4, 1e3), {0.1});
  const AssignResult r =
      assign_rbs(ch, 1e6, d, topo, cfg, 0.29, FronthaulPolicy::pooled(1e9));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      int holders = 0;
      for (int k = 0; k < 6; ++k) holders += r.sol.alpha(k, m, n) ? 1 : 0;
      CHECK(holders <= 1);
      if (r.sol.owner_at(m, n) < 0) CHECK(r.sol.power_at(m, n) == 0.0);
    }
}

TEST_CASE("subgradient fixed-step hand check") {
  SystemConfig cfg = small_cfg(2);
  cfg.min_rate_bps = 5e6;
  cfg.step_schedule.fixed_step = 0.01;
  const Topology topo = two_dbs_topology(true);
  const FronthaulPolicy policy = FronthaulPolicy::pooled(1e8);

  DualState d = make_duals({0.2, 0.0, 1.0}, {0.1, 0.0}, {0.3});
  SolutionSummary sum;
  sum.rate_per_ue = {4e6, 7e6, 5e6};      // grads: -1e6, +2e6, 0
  sum.power_per_dbs = {0.10, 25.0};       // grads: 0.13-0.10=0.03, 20-25=-5
  sum.rate_per_dbs = {6e7, 0.0};
  sum.wireless_rate = 1.2e8;              // grad: 1e8-1.2e8=-2e7

  const DualState next = subgradient_step(d, sum, topo, cfg, 0.29, 1e6, policy);
  CHECK(next.iter == 1);
  CHECK(next.mu[0] == doctest::Approx(0.2 + 0.01 * 1e6));   // below floor: mu rises
  CHECK(next.mu[1] == 0.0);                                  // projected at zero
  CHECK(next.mu[2] == doctest::Approx(1.0));                 // exactly tight: unchanged
  CHECK(next.gamma[0] == doctest::Approx(std::max(0.0, 0.1 - 0.01 * 0.03)));
  CHECK(next.gamma[1] == doctest::Approx(0.0 + 0.01 * 5.0));
  CHECK(next.upsilon[0] == doctest::Approx(0.3 + 0.01 * 2e7));
}

TEST_CASE("subgradient leaves tight system unchanged") {
  SystemConfig cfg = small_cfg(2);
  cfg.min_rate_bps = 5e6;
  cfg.step_schedule.fixed_step = 0.01;
  const Topology topo = two_dbs_topology(true);
  const FronthaulPolicy policy = FronthaulPolicy::pooled(1e8);
  const DualState d = make_duals({0.4, 0.2, 0.0}, {0.1, 0.2}, {0.3});
  SolutionSummary sum;
  sum.rate_per_ue = {5e6, 5e6, 5e6};
  sum.power_per_dbs = {0.13, 20.0};
  sum.rate_per_dbs = {1e8, 0.0};
  sum.wireless_rate = 1e8;
  const DualState next = subgradient_step(d, sum, topo, cfg, 0.29, 1e6, policy);
  CHECK(next.mu == d.mu);
  CHECK(next.gamma == d.gamma);
  CHECK(next.upsilon == d.upsilon);
}

TEST_CASE("solve_dual: slack instance converges to zero duals and water-filling") {
  SystemConfig cfg = small_cfg(3);
  cfg.fronthaul_cap_bps = 1e15;
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 20.0;
  topo.dbs_list = {hpn};
  topo.ue_list = {{100.0, 0.0}};
  ChannelState ch(1, 1, 3);
  ch.gains = {2e-10, 1e-10, 5e-11};
  PowerModel pm;
  const double q = 1e7;  // water level ~0.1 W per RB, far below P_max
  const DualSolveResult res =
      solve_dual(ch, q, topo, cfg, pm, FronthaulPolicy::pooled(cfg.fronthaul_cap_bps));
  REQUIRE(res.found_feasible);
  CHECK(res.duals.mu[0] == 0.0);
  CHECK(res.duals.gamma[0] == doctest::Approx(0.0).epsilon(1e-6));
  const double level = cfg.rb_bandwidth_hz / std::numbers::ln2_v<double> / (q * pm.phi_e);
  for (int n = 0; n < 3; ++n) {
    const double expect =
        std::max(0.0, level - cfg.rb_bandwidth_hz * cfg.noise_psd_w_per_hz / ch.gain(0, 0, n));
    CHECK(res.best.power_at(0, n) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("solve_dual objective near separable optimum at fixed q") {
  // r_min = 0, no wireless DBS: the fixed-q problem separates per slot and
  // the continuous per-slot optimum is exact.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ug(1e-12, 1e-9);
  SystemConfig cfg = small_cfg(3);
  const Topology topo = two_dbs_topology(false);
  PowerModel pm;
  for (int rep = 0; rep < 25; ++rep) {
    ChannelState ch(3, 2, 3);
    for (auto& g : ch.gains) g = ug(rng);
    const double q = 3e5 + 1e5 * static_cast<double>(rep);
    const DualSolveResult res =
        solve_dual(ch, q, topo, cfg, pm, FronthaulPolicy::pooled(1e15));
    REQUIRE(res.found_feasible);

    // per-DBS: maximize sum over slots of rate - q*phi*p subject to the power
    // budget, via a bisection on the budget multiplier. The primal point at
    // the bisected multiplier is a lower bound, the dual value an upper bound.
    double lower = -q * pm.p_static_w, upper = -q * pm.p_static_w;
    for (int m = 0; m < 2; ++m) {
      const double pmax = topo.dbs_list[static_cast<std::size_t>(m)].max_power_w;
      auto slot_best = [&](double lam, int n, double& p_out) {
        double best = 0.0;
        p_out = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double g = ch.gain(k, m, n);
          const double p = std::max(
              0.0, cfg.rb_bandwidth_hz / std::numbers::ln2_v<double> / lam -
                       cfg.rb_bandwidth_hz * cfg.noise_psd_w_per_hz / g);
          const double v = compute_rate(p, g, cfg) - lam * p;
          if (v > best) {
            best = v;
            p_out = p;
          }
        }
        return best;
      };
      auto spent = [&](double lam) {
        double s = 0.0;
        for (int n = 0; n < 3; ++n) {
          double p;
          slot_best(lam, n, p);
          s += p;
        }
        return s;
      };
      double lam = q * pm.phi_e;
      if (spent(lam) > pmax) {
        double lo = lam, hi = lam;
        while (spent(hi) > pmax) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (spent(mid) > pmax ? lo : hi) = mid;
        }
        lam = hi;
      }
      double dual_m = (lam - q * pm.phi_e) * pmax;
      for (int n = 0; n < 3; ++n) {
        double p;
        const double v = slot_best(lam, n, p);
        lower += v + (lam - q * pm.phi_e) * p;  // rate - q*phi*p at this slot
        dual_m += v;
      }
      upper += dual_m;
    }
    CHECK(res.best_obj >= lower - 0.02 * std::abs(lower));
    CHECK(res.best_obj <= upper + 1e-6 * std::abs(upper) + 1.0);
  }
}

TEST_CASE("solve_dual infeasible when r_min unreachable") {
  SystemConfig cfg = small_cfg(2);
  cfg.min_rate_bps = 1e12;
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 0.01;
  topo.dbs_list = {hpn};
  topo.ue_list = {{200.0, 0.0}};
  ChannelState ch(1, 1, 2);
  ch.gains = {1e-13, 1e-13};
  PowerModel pm;
  const DualSolveResult res = solve_dual(ch, 0.0, topo, cfg, pm, FronthaulPolicy::pooled(1e9));
  CHECK_FALSE(res.found_feasible);
  auto [sol, rep] = solve_ee(ch, topo, cfg, pm);
  CHECK(rep.status == SolveStatus::Infeasible);
}

TEST_CASE("solve_ee: q_trace nondecreasing and fixed point on random instances") {
  std::mt19937_64 rng(51);
  for (int rep = 0; rep < 30; ++rep) {
    DropSpec spec;
    spec.seed = 1000 + static_cast<std::uint64_t>(rep);
    spec.num_lpns = 1 + static_cast<int>(rng() % 4);
    spec.num_ues = 1 + static_cast<int>(rng() % 10);
    spec.num_wireless_fronthaul = static_cast<int>(rng() % (spec.num_lpns + 1u));
    SystemConfig cfg = small_cfg(1 + static_cast<int>(rng() % 10));
    cfg.fronthaul_cap_bps = 5e7;
    const Topology topo = generate_topology(spec);
    const ChannelState ch = synthesize_channel(topo, spec, cfg);
    PowerModel pm;
    auto [sol, rep_out] = solve_ee(ch, topo, cfg, pm);
    REQUIRE(rep_out.status == SolveStatus::Converged);
    for (std::size_t i = 1; i < rep_out.q_trace.size(); ++i)
      CHECK(rep_out.q_trace[i] >= rep_out.q_trace[i - 1] * (1.0 - 1e-12));
    const SolutionSummary sum = summarize(sol, ch, topo, cfg);
    const double p_total = pm.phi_e * sum.transmit_power + pm.p_static_w;
    CHECK(std::abs(sum.total_rate - sol.ee_bits_per_joule * p_total) <
          cfg.dinkelbach_tol * p_total);
  }
}

TEST_CASE("solve_ee symmetric instance yields equal powers") {
  SystemConfig cfg = small_cfg(4);
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 20.0;
  topo.dbs_list = {hpn};
  topo.ue_list = {{100.0, 0.0}, {0.0, 100.0}};
  ChannelState ch(2, 1, 4);
  for (auto& g : ch.gains) g = 1e-10;
  PowerModel pm;
  auto [sol, rep] = solve_ee(ch, topo, cfg, pm);
  REQUIRE(rep.status == SolveStatus::Converged);
  double p0 = -1.0;
  for (int n = 0; n < 4; ++n) {
    REQUIRE(sol.owner_at(0, n) == 0);  // ties break to the lowest UE index
    if (p0 < 0.0)
      p0 = sol.power_at(0, n);
    else
      CHECK(sol.power_at(0, n) == doctest::Approx(p0).epsilon(1e-9));
  }
}

TEST_CASE("water-filling KKT stationarity at converged duals") {
  DropSpec spec;
  spec.seed = 61;
  spec.num_lpns = 3;
  spec.num_ues = 5;
  spec.num_wireless_fronthaul = 1;
  SystemConfig cfg = small_cfg(5);
  cfg.fronthaul_cap_bps = 5e7;
  const Topology topo = generate_topology(spec);
  const ChannelState ch = synthesize_channel(topo, spec, cfg);
  PowerModel pm;
  auto [sol, rep] = solve_ee(ch, topo, cfg, pm);
  REQUIRE(rep.status == SolveStatus::Converged);

  DualState d;
  d.mu = sol.mu;
  d.gamma = sol.gamma;
  d.upsilon = sol.upsilon;
  const double q = sol.ee_bits_per_joule;
  const AssignResult raw =
      assign_rbs(ch, q, d, topo, cfg, pm.phi_e, FronthaulPolicy::pooled(cfg.fronthaul_cap_bps));
  int checked = 0;
  for (int m = 0; m < ch.num_dbs; ++m) {
    const bool wireless = topo.dbs_list[static_cast<std::size_t>(m)].wireless_fronthaul;
    const double denom =
        std::max(d.gamma[static_cast<std::size_t>(m)] + q * pm.phi_e, 1e-9);
    for (int n = 0; n < ch.num_rbs; ++n) {
      const int k = raw.sol.owner_at(m, n);
      const double p = raw.sol.power_at(m, n);
      if (k < 0 || p <= 0.0) continue;
      const double w =
          1.0 + d.mu[static_cast<std::size_t>(k)] - (wireless ? d.upsilon[0] : 0.0);
      const double g = ch.gain(k, m, n);
      const double b0n0 = cfg.rb_bandwidth_hz * cfg.noise_psd_w_per_hz;
      const double deriv =
          w * cfg.rb_bandwidth_hz * g / ((b0n0 + p * g) * std::numbers::ln2_v<double>) - denom;
      CHECK(std::abs(deriv) <= 1e-6 * denom);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("check_feasibility slack reporting") {
  SystemConfig cfg = small_cfg(2);
  cfg.min_rate_bps = 5e6;
  const Topology topo = two_dbs_topology(true);
  Topology t3 = topo;
  t3.ue_list = {{50.0, 0.0}};
  ChannelState ch(1, 2, 2);
  for (auto& g : ch.gains) g = 1e-10;
  const FronthaulPolicy policy = FronthaulPolicy::pooled(1e8);

  AllocationSolution zero(1, 2, 2);
  const FeasibilityReport r0 = check_feasibility(zero, ch, t3, cfg, policy);
  CHECK_FALSE(r0.feasible);
  CHECK(r0.c1_slack_bps[0] == doctest::Approx(-5e6));

  AllocationSolution at_max(1, 2, 2);
  at_max.set(0, 0, 0, 0.06);
  at_max.set(0, 1, 0, 0.07);  // LPN spends exactly 0.13
  const FeasibilityReport r1 = check_feasibility(at_max, ch, t3, cfg, policy);
  CHECK(std::abs(r1.c2_slack_w[0]) < 1e-15);

  const SolutionSummary sum = summarize(at_max, ch, t3, cfg);
  CHECK(r1.c1_slack_bps[0] == doctest::Approx(sum.rate_per_ue[0] - 5e6));
  CHECK(r1.c3_slack_bps[0] == doctest::Approx(1e8 - sum.wireless_rate));
}

TEST_CASE("solve_ee deterministic") {
  DropSpec spec;
  spec.seed = 71;
  spec.num_lpns = 4;
  spec.num_ues = 8;
  spec.num_wireless_fronthaul = 2;
  SystemConfig cfg = small_cfg(6);
  cfg.fronthaul_cap_bps = 4e7;
  const Topology topo = generate_topology(spec);
  const ChannelState ch = synthesize_channel(topo, spec, cfg);
  PowerModel pm;
  auto [a, ra] = solve_ee(ch, topo, cfg, pm);
  auto [b, rb] = solve_ee(ch, topo, cfg, pm);
  CHECK(a.ee_bits_per_joule == b.ee_bits_per_joule);
  CHECK(a.owner == b.owner);
  CHECK(a.power_w == b.power_w);
  CHECK(ra.q_trace == rb.q_trace);
}
