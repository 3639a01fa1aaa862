#include <doctest.h>

#include <cmath>
#include <string>

#include "hcran/fixtures.hpp"

using namespace hcran;

namespace {

SystemConfig tiny_cfg(int num_rbs) {
  SystemConfig cfg;
  cfg.num_rbs = num_rbs;
  cfg.total_bandwidth_hz = num_rbs * cfg.rb_bandwidth_hz;
  cfg.min_rate_bps = 0.0;
  cfg.p_static_w = 40.0;
  return cfg;
}

struct SmallDrop {
  Topology topo;
  ChannelState ch;
};

SmallDrop make_drop(std::uint64_t seed, int num_lpns, int num_ues, int num_wireless,
                    const SystemConfig& cfg) {
  DropSpec spec;
  spec.seed = seed;
  spec.num_lpns = num_lpns;
  spec.num_ues = num_ues;
  spec.num_wireless_fronthaul = num_wireless;
  SmallDrop d;
  d.topo = generate_topology(spec);
  d.ch = synthesize_channel(d.topo, spec, cfg);
  return d;
}

}  // namespace

TEST_CASE("build_power_model constants") {
  SystemConfig cfg;
  const PowerModel cdsa = build_power_model(Architecture::CDSA, cfg, 20);
  CHECK(cdsa.phi_e == doctest::Approx(0.29).epsilon(1e-15));
  CHECK(cdsa.p_static_w == doctest::Approx(439.0).epsilon(1e-12));

  const PowerModel conv = build_power_model(Architecture::Conventional, cfg, 20);
  CHECK(conv.phi_e == doctest::Approx(0.29 / 0.72).epsilon(1e-12));
  const double expect =
      191.2 + 87.8 / 0.9 + 60.0 + 5.0 * 20 + 2.8 * 21;
  CHECK(conv.p_static_w == doctest::Approx(expect).epsilon(1e-12));
  // the split-plane architecture strictly dominates on both power terms
  CHECK(conv.phi_e > cdsa.phi_e);
  CHECK(conv.p_static_w > cdsa.p_static_w);
}

TEST_CASE("solve_static equals pooled solver when no DBS is wireless") {
  SystemConfig cfg = tiny_cfg(4);
  cfg.fronthaul_cap_bps = 5e7;
  const SmallDrop d = make_drop(301, 3, 5, 0, cfg);
  const PowerModel pm = build_power_model(Architecture::CDSA, cfg, 3);
  auto [a, ra] = solve_ee(d.ch, d.topo, cfg, pm);
  auto [b, rb] = solve_static(d.ch, d.topo, cfg, pm);
  REQUIRE(ra.status == SolveStatus::Converged);
  REQUIRE(rb.status == SolveStatus::Converged);
  CHECK(a.ee_bits_per_joule == b.ee_bits_per_joule);
  CHECK(a.owner == b.owner);
  CHECK(a.power_w == b.power_w);
}

TEST_CASE("solve_static with one wireless DBS matches the pooled constraint") {
  SystemConfig cfg = tiny_cfg(4);
  cfg.fronthaul_cap_bps = 3e6;  // tight enough to bind
  const SmallDrop d = make_drop(302, 2, 4, 1, cfg);
  const PowerModel pm = build_power_model(Architecture::CDSA, cfg, 2);
  auto [a, ra] = solve_ee(d.ch, d.topo, cfg, pm);
  auto [b, rb] = solve_static(d.ch, d.topo, cfg, pm);
  REQUIRE(ra.status == SolveStatus::Converged);
  REQUIRE(rb.status == SolveStatus::Converged);
  CHECK(b.ee_bits_per_joule ==
        doctest::Approx(a.ee_bits_per_joule).epsilon(1e-9));
}

TEST_CASE("static fronthaul split never beats the pooled optimum") {
  for (int rep = 0; rep < 20; ++rep) {
    SystemConfig cfg = tiny_cfg(3 + rep % 3);
    cfg.fronthaul_cap_bps = 4e6;
    const SmallDrop d = make_drop(400 + static_cast<std::uint64_t>(rep), 2 + rep % 3,
                                  3 + rep % 4, 2, cfg);
    const PowerModel pm = build_power_model(Architecture::CDSA, cfg, 2 + rep % 3);
    auto [s, rs] = solve_static(d.ch, d.topo, cfg, pm);
    REQUIRE(rs.status == SolveStatus::Converged);
    auto [p, rp] = solve_ee(d.ch, d.topo, cfg, pm,
                            FronthaulPolicy::pooled(cfg.fronthaul_cap_bps), &s);
    REQUIRE(rp.status == SolveStatus::Converged);
    CHECK(p.ee_bits_per_joule >= s.ee_bits_per_joule * (1.0 - 1e-9));
  }
}

TEST_CASE("brute force matches a direct scan on a 1x1x1 instance") {
  SystemConfig cfg = tiny_cfg(1);
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 0.5;
  topo.dbs_list = {hpn};
  topo.ue_list = {{100.0, 0.0}};
  ChannelState ch(1, 1, 1);
  ch.gains = {3e-12};
  PowerModel pm;
  pm.p_static_w = cfg.p_static_w;

  const int levels = 16;
  const OracleResult res = brute_force_solve(ch, topo, cfg, pm, levels);
  REQUIRE(res.status == SolveStatus::Converged);

  double best = 0.0;
  for (int j = 0; j < levels; ++j) {
    const double p = 0.5 * std::pow(10.0, -3.0 * (levels - 1 - j) / (levels - 1));
    const double ee = compute_rate(p, ch.gains[0], cfg) / (pm.phi_e * p + pm.p_static_w);
    best = std::max(best, ee);
  }
  CHECK(res.best_ee == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("brute force reports infeasible floors as infeasible") {
  SystemConfig cfg = tiny_cfg(1);
  cfg.min_rate_bps = 1e12;
  Topology topo;
  topo.cell_radius_m = 500.0;
  Station hpn;
  hpn.kind = StationKind::HPN;
  hpn.max_power_w = 0.01;
  topo.dbs_list = {hpn};
  topo.ue_list = {{100.0, 0.0}};
  ChannelState ch(1, 1, 1);
  ch.gains = {1e-13};
  PowerModel pm;
  pm.p_static_w = cfg.p_static_w;
  const OracleResult res = brute_force_solve(ch, topo, cfg, pm, 8);
  CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("brute force EE improves with grid resolution") {
  SystemConfig cfg = tiny_cfg(2);
  const SmallDrop d = make_drop(500, 1, 2, 0, cfg);
  PowerModel pm;
  pm.p_static_w = cfg.p_static_w;
  double prev = 0.0;
  for (int levels : {9, 17, 33, 65}) {
    const OracleResult res = brute_force_solve(d.ch, d.topo, cfg, pm, levels);
    REQUIRE(res.status == SolveStatus::Converged);
    CHECK(res.best_ee >= prev * (1.0 - 1e-6));
    prev = res.best_ee;
  }
}

TEST_CASE("brute force refuses oversized instances") {
  SystemConfig cfg = tiny_cfg(3);
  const SmallDrop d = make_drop(501, 2, 3, 0, cfg);
  PowerModel pm;
  pm.p_static_w = cfg.p_static_w;
  OracleOptions opt;
  opt.budget = 10;
  CHECK_THROWS_AS(brute_force_solve(d.ch, d.topo, cfg, pm, 16, opt), OracleBudgetError);
}

TEST_CASE("fixture JSON round trip") {
  const OracleFixture fx = load_fixture("tests/fixtures/oracle_small_0.json");
  const OracleFixture fx2 = fixture_from_json(fixture_to_json(fx));
  CHECK(fx2.name == fx.name);
  CHECK(fx2.ch.gains == fx.ch.gains);
  CHECK(fx2.golden_oracle_ee == fx.golden_oracle_ee);
  CHECK(fx2.grid_levels == fx.grid_levels);
  CHECK(fx2.cfg.fronthaul_cap_bps == fx.cfg.fronthaul_cap_bps);
}

TEST_CASE("frozen golden EE values reproduce exactly") {
  // full recompute on a subset; the solver-vs-golden band runs on all 20
  for (int i : {0, 1, 7}) {
    const OracleFixture fx =
        load_fixture("tests/fixtures/oracle_small_" + std::to_string(i) + ".json");
    const OracleResult res =
        brute_force_solve(fx.ch, fx.topo, fx.cfg, fx.pm, fx.grid_levels);
    REQUIRE(res.status == SolveStatus::Converged);
    CHECK(res.best_ee == fx.golden_oracle_ee);
    CHECK(res.instances_searched == fx.golden_instances);
  }
}

TEST_CASE("solver stays within the oracle band on all fixtures") {
  for (int i = 0; i < 20; ++i) {
    const OracleFixture fx =
        load_fixture("tests/fixtures/oracle_small_" + std::to_string(i) + ".json");
    auto [sol, rep] = solve_ee(fx.ch, fx.topo, fx.cfg, fx.pm);
    REQUIRE(rep.status == SolveStatus::Converged);
    const double ratio = sol.ee_bits_per_joule / fx.golden_oracle_ee;
    CHECK(ratio >= 0.98);
    CHECK(ratio <= 1.001);
  }
}
