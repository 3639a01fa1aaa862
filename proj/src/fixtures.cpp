#include "hcran/fixtures.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hcran {

std::string fixture_to_json(const OracleFixture& fx) {
  nlohmann::json j;
  j["schema"] = "hcran-oracle-fixture-v1";
  j["name"] = fx.name;
  nlohmann::json c;
  c["total_bandwidth_hz"] = fx.cfg.total_bandwidth_hz;
  c["num_rbs"] = fx.cfg.num_rbs;
  c["noise_psd_w_per_hz"] = fx.cfg.noise_psd_w_per_hz;
  c["phi_e"] = fx.cfg.phi_e;
  c["p_static_w"] = fx.cfg.p_static_w;
  c["fronthaul_cap_bps"] = fx.cfg.fronthaul_cap_bps;
  c["min_rate_bps"] = fx.cfg.min_rate_bps;
  c["min_rate_per_ue_bps"] = fx.cfg.min_rate_per_ue_bps;
  j["config"] = c;
  j["power_model"] = {{"phi_e", fx.pm.phi_e}, {"p_static_w", fx.pm.p_static_w}};
  j["drop"] = nlohmann::json::parse(drop_to_json(fx.topo, fx.ch));
  j["grid_levels"] = fx.grid_levels;
  j["golden_oracle_ee"] = fx.golden_oracle_ee;
  j["golden_instances"] = fx.golden_instances;
  return j.dump(2);
}

OracleFixture fixture_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema").get<std::string>() != "hcran-oracle-fixture-v1")
    throw InvalidInput("unsupported fixture schema");
  OracleFixture fx;
  fx.name = j.at("name").get<std::string>();
  const auto& c = j.at("config");
  fx.cfg.total_bandwidth_hz = c.at("total_bandwidth_hz").get<double>();
  fx.cfg.num_rbs = c.at("num_rbs").get<int>();
  fx.cfg.rb_bandwidth_hz = fx.cfg.total_bandwidth_hz / fx.cfg.num_rbs;
  fx.cfg.noise_psd_w_per_hz = c.at("noise_psd_w_per_hz").get<double>();
  fx.cfg.phi_e = c.at("phi_e").get<double>();
  fx.cfg.p_static_w = c.at("p_static_w").get<double>();
  fx.cfg.fronthaul_cap_bps = c.at("fronthaul_cap_bps").get<double>();
  fx.cfg.min_rate_bps = c.at("min_rate_bps").get<double>();
  fx.cfg.min_rate_per_ue_bps = c.at("min_rate_per_ue_bps").get<std::vector<double>>();
  fx.pm.architecture = Architecture::CDSA;
  fx.pm.phi_e = j.at("power_model").at("phi_e").get<double>();
  fx.pm.p_static_w = j.at("power_model").at("p_static_w").get<double>();
  drop_from_json(j.at("drop").dump(), fx.topo, fx.ch);
  fx.grid_levels = j.at("grid_levels").get<int>();
  fx.golden_oracle_ee = j.at("golden_oracle_ee").get<double>();
  fx.golden_instances = j.at("golden_instances").get<long long>();
  return fx;
}

OracleFixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open fixture: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fixture_from_json(ss.str());
}

void save_fixture(const std::string& path, const OracleFixture& fx) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  out << fixture_to_json(fx) << '\n';
}

}  // namespace hcran
