#include "hcran/channel.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace hcran {

namespace {

constexpr double kGainFloor = 1e-30;
constexpr int kMaxResamples = 10000;

// Point-in-hexagon test for a flat-top hexagon of circumradius r centered at
// the origin.
bool in_hexagon(double x, double y, double r) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double h = r * std::sqrt(3.0) / 2.0;  // apothem
  if (ay > h) return false;
  return h * ax + 0.5 * r * ay <= h * r + 1e-12;
}

std::pair<double, double> sample_in_hexagon(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> ux(-r, r);
  std::uniform_real_distribution<double> uy(-r, r);
  for (int i = 0; i < kMaxResamples; ++i) {
    const double x = ux(rng), y = uy(rng);
    if (in_hexagon(x, y, r)) return {x, y};
  }
  throw GenerationError("hexagon rejection sampling failed");
}

double dist(double x1, double y1, double x2, double y2) {
  return std::hypot(x1 - x2, y1 - y2);
}

}  // namespace

void DropSpec::validate() const {
  if (num_lpns < 1 || num_ues < 1) throw InvalidInput("DropSpec: counts must be >= 1");
  if (num_wireless_fronthaul < 0 || num_wireless_fronthaul > num_lpns)
    throw InvalidInput("DropSpec: num_wireless_fronthaul must be in [0, num_lpns]");
  if (isd_m <= 0) throw InvalidInput("DropSpec: isd_m must be positive");
  if (min_ue_dbs_distance_m < 0) throw InvalidInput("DropSpec: min distance must be nonnegative");
  if (hpn_max_power_w <= 0 || lpn_max_power_w <= 0)
    throw InvalidInput("DropSpec: station powers must be positive");
}

Topology generate_topology(const DropSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  Topology topo;
  topo.cell_radius_m = spec.isd_m / std::sqrt(3.0);
  if (spec.min_ue_dbs_distance_m >= topo.cell_radius_m)
    throw GenerationError("min UE-DBS distance exceeds the cell radius");

  topo.dbs_list.resize(static_cast<std::size_t>(spec.num_lpns) + 1);
  for (int i = 0; i < spec.num_lpns; ++i) {
    auto [x, y] = sample_in_hexagon(rng, topo.cell_radius_m);
    topo.dbs_list[static_cast<std::size_t>(i)] =
        Station{StationKind::LPN, x, y, spec.lpn_max_power_w, false};
  }
  topo.dbs_list.back() =
      Station{StationKind::HPN, 0.0, 0.0, spec.hpn_max_power_w, spec.hpn_wireless};

  // Wireless fronthaul flags: uniform random subset of the LPNs.
  std::vector<int> idx(static_cast<std::size_t>(spec.num_lpns));
  for (int i = 0; i < spec.num_lpns; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = spec.num_lpns - 1; i > 0; --i) {
    std::uniform_int_distribution<int> u(0, i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(u(rng))]);
  }
  for (int i = 0; i < spec.num_wireless_fronthaul; ++i)
    topo.dbs_list[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].wireless_fronthaul =
        true;

  topo.ue_list.resize(static_cast<std::size_t>(spec.num_ues));
  for (int k = 0; k < spec.num_ues; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxResamples && !placed; ++attempt) {
      auto [x, y] = sample_in_hexagon(rng, topo.cell_radius_m);
      placed = true;
      for (const auto& s : topo.dbs_list)
        if (dist(x, y, s.x_m, s.y_m) < spec.min_ue_dbs_distance_m) {
          placed = false;
          break;
        }
      if (placed) topo.ue_list[static_cast<std::size_t>(k)] = {x, y};
    }
    if (!placed)
      throw GenerationError("could not place UE " + std::to_string(k) +
                            " clear of the minimum UE-DBS distance");
  }
  topo.validate();
  return topo;
}

double path_loss_db(StationKind kind, double distance_m) {
  if (!(distance_m > 0.0)) throw InvalidInput("path_loss_db: distance must be positive");
  const double d_km = distance_m / 1000.0;
  if (kind == StationKind::HPN) return 128.1 + 37.6 * std::log10(d_km);
  return 140.7 + 36.7 * std::log10(d_km);
}

ChannelState synthesize_channel(const Topology& topo, const DropSpec& spec,
                                const SystemConfig& cfg) {
  (void)cfg;
  topo.validate();
  // Offset stream so topology and channel draws do not alias.
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const int K = topo.num_ues(), M1 = topo.num_dbs(), N = cfg.num_rbs;
  ChannelState ch(K, M1, N);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M1; ++m) {
      const Station& s = topo.dbs_list[static_cast<std::size_t>(m)];
      const double d = dist(topo.ue_list[static_cast<std::size_t>(k)].first,
                            topo.ue_list[static_cast<std::size_t>(k)].second, s.x_m, s.y_m);
      const double pl = path_loss_db(s.kind, std::max(d, 1e-3));
      double shadow_db = 0.0;
      if (spec.fading.shadowing) {
        const double std_db = s.kind == StationKind::HPN ? spec.fading.shadowing_std_hpn_db
                                                         : spec.fading.shadowing_std_lpn_db;
        shadow_db = std_db * gauss(rng);
      }
      const double large_scale = std::pow(10.0, -(pl + shadow_db) / 10.0);
      for (int n = 0; n < N; ++n) {
        double h2 = 1.0;
        if (spec.fading.rayleigh) {
          // |h|^2 ~ Exp(1): unit mean power per RB.
          h2 = -std::log(1.0 - uni(rng));
        }
        ch.gain(k, m, n) = std::max(large_scale * h2, kGainFloor);
      }
    }
  }
  ch.validate();
  return ch;
}

std::string drop_to_json(const Topology& topo, const ChannelState& ch) {
  nlohmann::json j;
  j["schema"] = "hcran-drop-v1";
  j["cell_radius_m"] = topo.cell_radius_m;
  for (const auto& s : topo.dbs_list)
    j["stations"].push_back({{"kind", s.kind == StationKind::HPN ? "HPN" : "LPN"},
                             {"x_m", s.x_m},
                             {"y_m", s.y_m},
                             {"max_power_w", s.max_power_w},
                             {"wireless", s.wireless_fronthaul}});
  for (const auto& [x, y] : topo.ue_list) j["ues"].push_back({x, y});
  j["num_rbs"] = ch.num_rbs;
  j["gains"] = ch.gains;
  return j.dump();
}

void drop_from_json(const std::string& text, Topology& topo, ChannelState& ch) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "hcran-drop-v1")
    throw InvalidInput("drop file: unknown schema");
  topo = Topology{};
  topo.cell_radius_m = j.at("cell_radius_m").get<double>();
  for (const auto& s : j.at("stations")) {
    Station st;
    st.kind = s.at("kind").get<std::string>() == "HPN" ? StationKind::HPN : StationKind::LPN;
    st.x_m = s.at("x_m").get<double>();
    st.y_m = s.at("y_m").get<double>();
    st.max_power_w = s.at("max_power_w").get<double>();
    st.wireless_fronthaul = s.at("wireless").get<bool>();
    topo.dbs_list.push_back(st);
  }
  for (const auto& u : j.at("ues"))
    topo.ue_list.emplace_back(u.at(0).get<double>(), u.at(1).get<double>());
  const int N = j.at("num_rbs").get<int>();
  ch = ChannelState(topo.num_ues(), topo.num_dbs(), N);
  ch.gains = j.at("gains").get<std::vector<double>>();
  topo.validate();
  ch.validate();
}

void save_drop(const std::string& path, const Topology& topo, const ChannelState& ch) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << drop_to_json(topo, ch);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void load_drop(const std::string& path, Topology& topo, ChannelState& ch) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  drop_from_json(ss.str(), topo, ch);
}

}  // namespace hcran
