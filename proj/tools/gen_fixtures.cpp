// Regenerates the frozen oracle fixtures under tests/fixtures/. Run manually;
// the goldens are committed and the test suite only reads them.
#include <cstdio>
#include <string>

#include "hcran/fixtures.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "tests/fixtures";
  const int kCount = 20;
  for (int i = 0; i < kCount; ++i) {
    hcran::DropSpec spec;
    spec.seed = 9000 + static_cast<std::uint64_t>(i) * 131;
    spec.num_lpns = 1;
    spec.num_ues = 2;
    spec.num_wireless_fronthaul = i % 2;  // half wired-only, half one wireless DBS
    spec.isd_m = 500.0;

    hcran::SystemConfig cfg;
    cfg.num_rbs = 3;
    cfg.total_bandwidth_hz = cfg.num_rbs * 200e3;
    cfg.rb_bandwidth_hz = 200e3;
    cfg.min_rate_bps = 0.0;
    cfg.p_static_w = 40.0;
    // Tight caps on a third of the wireless fixtures so C3 binds.
    cfg.fronthaul_cap_bps = (i % 6 == 1) ? 6e6 : 0.8e9;

    hcran::OracleFixture fx;
    fx.name = "oracle_small_" + std::to_string(i);
    fx.cfg = cfg;
    fx.pm.architecture = hcran::Architecture::CDSA;
    fx.pm.phi_e = cfg.phi_e;
    fx.pm.p_static_w = cfg.p_static_w;
    fx.topo = hcran::generate_topology(spec);
    fx.ch = hcran::synthesize_channel(fx.topo, spec, cfg);
    fx.grid_levels = 64;

    const hcran::OracleResult res =
        hcran::brute_force_solve(fx.ch, fx.topo, fx.cfg, fx.pm, fx.grid_levels);
    if (res.status == hcran::SolveStatus::Infeasible) {
      std::fprintf(stderr, "%s: oracle found no feasible point, pick another seed\n",
                   fx.name.c_str());
      return 1;
    }
    fx.golden_oracle_ee = res.best_ee;
    fx.golden_instances = res.instances_searched;

    const std::string path = dir + "/" + fx.name + ".json";
    hcran::save_fixture(path, fx);
    std::printf("%s: ee=%.9g searched=%lld\n", path.c_str(), fx.golden_oracle_ee,
                fx.golden_instances);
  }
  return 0;
}
