#pragma once

#include <string>

#include "hcran/baselines.hpp"
#include "hcran/channel.hpp"

namespace hcran {

// Small frozen instance for oracle cross-checks: full config + topology +
// gain tensor + the golden exhaustive-search EE.
struct OracleFixture {
  std::string name;
  SystemConfig cfg;
  PowerModel pm;
  Topology topo;
  ChannelState ch;
  int grid_levels = 64;
  double golden_oracle_ee = 0.0;
  long long golden_instances = 0;
};

std::string fixture_to_json(const OracleFixture& fx);
OracleFixture fixture_from_json(const std::string& text);
OracleFixture load_fixture(const std::string& path);
void save_fixture(const std::string& path, const OracleFixture& fx);

}  // namespace hcran
