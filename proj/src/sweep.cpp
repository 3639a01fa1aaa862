#include "hcran/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

namespace hcran {

namespace {

constexpr const char* kToolVersion = "hcran 1.0.0";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

double round9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void check_keys(const nlohmann::json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + ctx + it.key() + "'");
  }
}

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
  }
}

SweepAxis axis_from_name(const std::string& s) {
  if (s == "fronthaul_capacity") return SweepAxis::FronthaulCapacity;
  if (s == "wireless_dbs_count") return SweepAxis::WirelessDbsCount;
  if (s == "min_rate") return SweepAxis::MinRate;
  if (s == "dbs_density") return SweepAxis::DbsDensity;
  throw ConfigError("field 'axis': unknown value '" + s + "'");
}

}  // namespace

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::FronthaulCapacity: return "fronthaul_capacity";
    case SweepAxis::WirelessDbsCount: return "wireless_dbs_count";
    case SweepAxis::MinRate: return "min_rate";
    case SweepAxis::DbsDensity: return "dbs_density";
  }
  return "?";
}

std::string algorithm_name(Algorithm a) {
  return a == Algorithm::Proposed ? "proposed" : "static";
}

std::string architecture_name(Architecture a) {
  return a == Architecture::CDSA ? "cdsa" : "conventional";
}

std::uint64_t drop_seed(std::uint64_t base_seed, int drop_index) {
  return splitmix64(base_seed ^ (0x51ed270b7a1c2865ULL * (static_cast<std::uint64_t>(drop_index) + 1)));
}

std::uint64_t hash_channel(const ChannelState& ch) {
  return fnv1a(ch.gains.data(), ch.gains.size() * sizeof(double));
}

void ExperimentPlan::validate() const {
  if (sweep_values.empty()) throw ConfigError("field 'sweep_values': must be nonempty");
  for (std::size_t i = 1; i < sweep_values.size(); ++i)
    if (sweep_values[i] < sweep_values[i - 1])
      throw ConfigError("field 'sweep_values': must be sorted ascending");
  if (drops_per_point < 1) throw ConfigError("field 'drops_per_point': must be >= 1");
  if (algorithms.empty()) throw ConfigError("field 'algorithms': must be nonempty");
  if (architectures.empty()) throw ConfigError("field 'architectures': must be nonempty");
  if (config.total_bandwidth_hz <= 0)
    throw ConfigError("field 'config.bandwidth_hz': must be positive");
  try {
    config.validate();
    drop.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

std::string plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  j["axis"] = axis_name(plan.axis);
  j["sweep_values"] = plan.sweep_values;
  for (Algorithm a : plan.algorithms) j["algorithms"].push_back(algorithm_name(a));
  for (Architecture a : plan.architectures)
    j["architectures"].push_back(architecture_name(a));
  j["drops_per_point"] = plan.drops_per_point;
  j["base_seed"] = plan.base_seed;
  if (!std::isnan(plan.static_per_dbs_cap_bps))
    j["static_per_dbs_cap_bps"] = plan.static_per_dbs_cap_bps;

  nlohmann::json c;
  c["bandwidth_hz"] = plan.config.total_bandwidth_hz;
  c["num_rbs"] = plan.config.num_rbs;
  c["noise_psd_dbm_per_hz"] =
      10.0 * std::log10(plan.config.noise_psd_w_per_hz) + 30.0;
  c["phi_e"] = plan.config.phi_e;
  c["fronthaul_cap_bps"] = plan.config.fronthaul_cap_bps;
  c["min_rate_bps"] = plan.config.min_rate_bps;
  c["dinkelbach_tol"] = plan.config.dinkelbach_tol;
  c["dinkelbach_max_iters"] = plan.config.dinkelbach_max_iters;
  c["dual_max_iters"] = plan.config.dual_max_iters;
  c["dual_patience"] = plan.config.dual_patience;
  c["dual_move_tol"] = plan.config.dual_move_tol;
  c["constraint_rel_tol"] = plan.config.constraint_rel_tol;
  c["step"] = {{"c_mu", plan.config.step_schedule.c_mu},
               {"c_gamma", plan.config.step_schedule.c_gamma},
               {"c_upsilon", plan.config.step_schedule.c_upsilon}};
  j["config"] = c;

  nlohmann::json d;
  d["num_lpns"] = plan.drop.num_lpns;
  d["num_ues"] = plan.drop.num_ues;
  d["num_wireless"] = plan.drop.num_wireless_fronthaul;
  d["isd_m"] = plan.drop.isd_m;
  d["min_ue_dbs_distance_m"] = plan.drop.min_ue_dbs_distance_m;
  d["hpn_max_power_w"] = plan.drop.hpn_max_power_w;
  d["lpn_max_power_w"] = plan.drop.lpn_max_power_w;
  d["shadowing_std_hpn_db"] = plan.drop.fading.shadowing_std_hpn_db;
  d["shadowing_std_lpn_db"] = plan.drop.fading.shadowing_std_lpn_db;
  d["rayleigh"] = plan.drop.fading.rayleigh;
  d["shadowing"] = plan.drop.fading.shadowing;
  j["drop"] = d;

  nlohmann::json p;
  p["platform_w"] = plan.breakdown.platform_w;
  p["fronthaul_w"] = plan.breakdown.fronthaul_w;
  p["hpn_w"] = plan.breakdown.hpn_w;
  p["per_lpn_w"] = plan.breakdown.per_lpn_w;
  p["conv_fronthaul_ratio"] = plan.conv.fronthaul_power_ratio;
  p["conv_overhead_fraction"] = plan.conv.overhead_fraction;
  p["conv_baseband_per_bs_w"] = plan.conv.baseband_per_bs_w;
  j["power"] = p;
  return j.dump(2);
}

ExperimentPlan plan_from_json(const std::string& text) {
  nlohmann::json j;
  std::string stripped;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) stripped.push_back(ch);
  if (stripped.empty()) {
    j = nlohmann::json::object();
  } else {
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(j, "",
             {"axis", "sweep_values", "algorithms", "architectures", "drops_per_point",
              "base_seed", "static_per_dbs_cap_bps", "config", "drop", "power"});

  ExperimentPlan plan;
  if (j.contains("axis")) plan.axis = axis_from_name(j.at("axis").get<std::string>());
  read_field(j, "sweep_values", plan.sweep_values);
  if (j.contains("algorithms")) {
    plan.algorithms.clear();
    for (const auto& a : j.at("algorithms")) {
      const std::string s = a.get<std::string>();
      if (s == "proposed")
        plan.algorithms.push_back(Algorithm::Proposed);
      else if (s == "static")
        plan.algorithms.push_back(Algorithm::Static);
      else
        throw ConfigError("field 'algorithms': unknown value '" + s + "'");
    }
  }
  if (j.contains("architectures")) {
    plan.architectures.clear();
    for (const auto& a : j.at("architectures")) {
      const std::string s = a.get<std::string>();
      if (s == "cdsa")
        plan.architectures.push_back(Architecture::CDSA);
      else if (s == "conventional")
        plan.architectures.push_back(Architecture::Conventional);
      else
        throw ConfigError("field 'architectures': unknown value '" + s + "'");
    }
  }
  read_field(j, "drops_per_point", plan.drops_per_point);
  read_field(j, "base_seed", plan.base_seed);
  read_field(j, "static_per_dbs_cap_bps", plan.static_per_dbs_cap_bps);

  if (j.contains("config")) {
    const auto& c = j.at("config");
    check_keys(c, "config.",
               {"bandwidth_hz", "num_rbs", "noise_psd_dbm_per_hz", "phi_e", "p_static_w",
                "fronthaul_cap_bps", "min_rate_bps", "dinkelbach_tol", "dinkelbach_max_iters",
                "dual_max_iters", "dual_patience", "dual_move_tol", "constraint_rel_tol",
                "step"});
    read_field(c, "bandwidth_hz", plan.config.total_bandwidth_hz);
    read_field(c, "num_rbs", plan.config.num_rbs);
    if (c.contains("noise_psd_dbm_per_hz"))
      plan.config.noise_psd_w_per_hz =
          dbm_per_hz_to_w_per_hz(c.at("noise_psd_dbm_per_hz").get<double>());
    read_field(c, "phi_e", plan.config.phi_e);
    read_field(c, "fronthaul_cap_bps", plan.config.fronthaul_cap_bps);
    read_field(c, "min_rate_bps", plan.config.min_rate_bps);
    read_field(c, "dinkelbach_tol", plan.config.dinkelbach_tol);
    read_field(c, "dinkelbach_max_iters", plan.config.dinkelbach_max_iters);
    read_field(c, "dual_max_iters", plan.config.dual_max_iters);
    read_field(c, "dual_patience", plan.config.dual_patience);
    read_field(c, "dual_move_tol", plan.config.dual_move_tol);
    read_field(c, "constraint_rel_tol", plan.config.constraint_rel_tol);
    if (c.contains("step")) {
      const auto& s = c.at("step");
      check_keys(s, "config.step.", {"c_mu", "c_gamma", "c_upsilon"});
      read_field(s, "c_mu", plan.config.step_schedule.c_mu);
      read_field(s, "c_gamma", plan.config.step_schedule.c_gamma);
      read_field(s, "c_upsilon", plan.config.step_schedule.c_upsilon);
    }
  }
  plan.config.rb_bandwidth_hz = plan.config.total_bandwidth_hz / plan.config.num_rbs;

  if (j.contains("drop")) {
    const auto& d = j.at("drop");
    check_keys(d, "drop.",
               {"num_lpns", "num_ues", "num_wireless", "isd_m", "min_ue_dbs_distance_m",
                "hpn_max_power_w", "lpn_max_power_w", "shadowing_std_hpn_db",
                "shadowing_std_lpn_db", "rayleigh", "shadowing"});
    read_field(d, "num_lpns", plan.drop.num_lpns);
    read_field(d, "num_ues", plan.drop.num_ues);
    read_field(d, "num_wireless", plan.drop.num_wireless_fronthaul);
    read_field(d, "isd_m", plan.drop.isd_m);
    read_field(d, "min_ue_dbs_distance_m", plan.drop.min_ue_dbs_distance_m);
    read_field(d, "hpn_max_power_w", plan.drop.hpn_max_power_w);
    read_field(d, "lpn_max_power_w", plan.drop.lpn_max_power_w);
    read_field(d, "shadowing_std_hpn_db", plan.drop.fading.shadowing_std_hpn_db);
    read_field(d, "shadowing_std_lpn_db", plan.drop.fading.shadowing_std_lpn_db);
    read_field(d, "rayleigh", plan.drop.fading.rayleigh);
    read_field(d, "shadowing", plan.drop.fading.shadowing);
  }

  if (j.contains("power")) {
    const auto& p = j.at("power");
    check_keys(p, "power.",
               {"platform_w", "fronthaul_w", "hpn_w", "per_lpn_w", "conv_fronthaul_ratio",
                "conv_overhead_fraction", "conv_baseband_per_bs_w"});
    read_field(p, "platform_w", plan.breakdown.platform_w);
    read_field(p, "fronthaul_w", plan.breakdown.fronthaul_w);
    read_field(p, "hpn_w", plan.breakdown.hpn_w);
    read_field(p, "per_lpn_w", plan.breakdown.per_lpn_w);
    read_field(p, "conv_fronthaul_ratio", plan.conv.fronthaul_power_ratio);
    read_field(p, "conv_overhead_fraction", plan.conv.overhead_fraction);
    read_field(p, "conv_baseband_per_bs_w", plan.conv.baseband_per_bs_w);
  }

  // An explicit p_static_w override is absorbed into the platform share so
  // the breakdown still sums to the requested total at the plan's LPN count.
  if (j.contains("config") && j.at("config").contains("p_static_w")) {
    const double want = j.at("config").at("p_static_w").get<double>();
    const double have = plan.breakdown.platform_w + plan.breakdown.fronthaul_w +
                        plan.breakdown.hpn_w + plan.breakdown.per_lpn_w * plan.drop.num_lpns;
    plan.breakdown.platform_w += want - have;
  }
  plan.config.p_static_w = plan.breakdown.platform_w + plan.breakdown.fronthaul_w +
                           plan.breakdown.hpn_w +
                           plan.breakdown.per_lpn_w * plan.drop.num_lpns;

  plan.validate();
  return plan;
}

ExperimentPlan parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

std::string config_hash(const ExperimentPlan& plan) {
  const std::string s = plan_to_json(plan);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(s.data(), s.size())));
  return buf;
}

namespace {

struct DropEval {
  // One solved algorithm on one drop; EE is evaluated per architecture on
  // the same allocation, which keeps SE identical across architectures.
  bool feasible = false;
  double rate = 0.0;
  double transmit_power = 0.0;
  int dinkelbach_iters = 0;
  int dual_iters = 0;
};

struct DropResult {
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
  DropEval evals[2];  // indexed by Algorithm
};

}  // namespace

SweepResult run_sweep(const ExperimentPlan& plan, int threads) {
  plan.validate();
  SweepResult result;
  result.config_hash = config_hash(plan);
  result.tool_version = kToolVersion;
  result.base_seed = plan.base_seed;

  const bool want_static =
      std::find(plan.algorithms.begin(), plan.algorithms.end(), Algorithm::Static) !=
      plan.algorithms.end();
  const bool want_proposed =
      std::find(plan.algorithms.begin(), plan.algorithms.end(), Algorithm::Proposed) !=
      plan.algorithms.end();

  for (double value : plan.sweep_values) {
    SystemConfig cfg = plan.config;
    DropSpec spec = plan.drop;
    switch (plan.axis) {
      case SweepAxis::FronthaulCapacity: cfg.fronthaul_cap_bps = value; break;
      case SweepAxis::WirelessDbsCount:
        spec.num_wireless_fronthaul = static_cast<int>(value);
        break;
      case SweepAxis::MinRate: cfg.min_rate_bps = value; break;
      case SweepAxis::DbsDensity:
        spec.num_lpns = static_cast<int>(value);
        spec.num_wireless_fronthaul = std::min(spec.num_wireless_fronthaul, spec.num_lpns);
        break;
    }
    const PowerModel pm_cdsa =
        build_power_model(Architecture::CDSA, cfg, spec.num_lpns, plan.breakdown, plan.conv);
    const PowerModel pm_conv = build_power_model(Architecture::Conventional, cfg,
                                                 spec.num_lpns, plan.breakdown, plan.conv);
    std::optional<double> static_cap;
    if (!std::isnan(plan.static_per_dbs_cap_bps))
      static_cap = plan.static_per_dbs_cap_bps;
    else if (plan.axis == SweepAxis::WirelessDbsCount)
      static_cap = 50e6;

    auto eval_drop = [&](int d) -> DropResult {
      DropResult out;
      out.seed = drop_seed(plan.base_seed, d);
      DropSpec ds = spec;
      ds.seed = out.seed;
      try {
        const Topology topo = generate_topology(ds);
        const ChannelState ch = synthesize_channel(topo, ds, cfg);
        out.hash = hash_channel(ch);

        AllocationSolution static_sol;
        bool static_ok = false;
        if (want_static) {
          auto [sol, rep] = solve_static(ch, topo, cfg, pm_cdsa, static_cap);
          static_ok = rep.status != SolveStatus::Infeasible;
          DropEval& e = out.evals[1];
          e.feasible = static_ok;
          if (static_ok) {
            const SolutionSummary s = summarize(sol, ch, topo, cfg);
            e.rate = s.total_rate;
            e.transmit_power = s.transmit_power;
          }
          e.dinkelbach_iters = sol.dinkelbach_iters;
          e.dual_iters = sol.dual_iters_total;
          static_sol = std::move(sol);
        }
        if (want_proposed) {
          const AllocationSolution* inc = static_ok ? &static_sol : nullptr;
          auto [sol, rep] = solve_ee(ch, topo, cfg, pm_cdsa,
                                     FronthaulPolicy::pooled(cfg.fronthaul_cap_bps), inc);
          DropEval& e = out.evals[0];
          e.feasible = rep.status != SolveStatus::Infeasible;
          if (e.feasible) {
            const SolutionSummary s = summarize(sol, ch, topo, cfg);
            e.rate = s.total_rate;
            e.transmit_power = s.transmit_power;
          }
          e.dinkelbach_iters = sol.dinkelbach_iters;
          e.dual_iters = sol.dual_iters_total;
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("drop with seed " + std::to_string(out.seed) +
                                 " failed: " + e.what());
      }
      return out;
    };

    std::vector<DropResult> drops(static_cast<std::size_t>(plan.drops_per_point));
    if (threads <= 1) {
      for (int d = 0; d < plan.drops_per_point; ++d)
        drops[static_cast<std::size_t>(d)] = eval_drop(d);
    } else {
      for (int start = 0; start < plan.drops_per_point; start += threads) {
        std::vector<std::future<DropResult>> futs;
        for (int d = start; d < std::min(start + threads, plan.drops_per_point); ++d)
          futs.push_back(std::async(std::launch::async, eval_drop, d));
        for (int d = start; d < std::min(start + threads, plan.drops_per_point); ++d)
          drops[static_cast<std::size_t>(d)] =
              futs[static_cast<std::size_t>(d - start)].get();
      }
    }

    SweepPoint pt;
    pt.axis_value = value;
    for (Algorithm alg : plan.algorithms) {
      const int ai = alg == Algorithm::Proposed ? 0 : 1;
      for (Architecture arch : plan.architectures) {
        const PowerModel& pm = arch == Architecture::CDSA ? pm_cdsa : pm_conv;
        SweepCell cell;
        cell.algorithm = alg;
        cell.architecture = arch;
        double sum = 0.0, sum2 = 0.0, se_sum = 0.0, it_sum = 0.0;
        for (const DropResult& dr : drops) {
          const DropEval& e = dr.evals[ai];
          DropOutcome o;
          o.seed = dr.seed;
          o.drop_hash = dr.hash;
          o.feasible = e.feasible;
          o.dinkelbach_iters = e.dinkelbach_iters;
          o.dual_iters = e.dual_iters;
          if (e.feasible) {
            o.ee_bits_per_joule = e.rate / (pm.phi_e * e.transmit_power + pm.p_static_w);
            o.se_bps_per_hz = e.rate / cfg.total_bandwidth_hz;
            sum += o.ee_bits_per_joule;
            sum2 += o.ee_bits_per_joule * o.ee_bits_per_joule;
            se_sum += o.se_bps_per_hz;
            it_sum += e.dinkelbach_iters;
            ++cell.stats.feasible_drops;
          }
          cell.drops.push_back(o);
        }
        cell.stats.total_drops = plan.drops_per_point;
        const int nf = cell.stats.feasible_drops;
        cell.stats.feasibility_rate = static_cast<double>(nf) / plan.drops_per_point;
        if (nf > 0) {
          cell.stats.mean_ee = sum / nf;
          cell.stats.mean_se = se_sum / nf;
          cell.stats.mean_solver_iters = it_sum / nf;
          if (nf > 1) {
            const double var =
                std::max(0.0, (sum2 - sum * sum / nf) / (nf - 1));
            cell.stats.std_ee = std::sqrt(var);
          }
        }
        pt.cells.push_back(std::move(cell));
      }
    }
    result.points.push_back(std::move(pt));
  }
  return result;
}

std::string results_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "axis_value,algorithm,architecture,mean_ee_bits_per_joule,std_ee,"
         "feasible_drops,total_drops\n";
  for (const auto& pt : result.points)
    for (const auto& cell : pt.cells)
      out << fmt9(pt.axis_value) << ',' << algorithm_name(cell.algorithm) << ','
          << architecture_name(cell.architecture) << ',' << fmt9(cell.stats.mean_ee) << ','
          << fmt9(cell.stats.std_ee) << ',' << cell.stats.feasible_drops << ','
          << cell.stats.total_drops << '\n';
  return out.str();
}

std::string results_to_json(const SweepResult& result, const ExperimentPlan& plan) {
  nlohmann::json j;
  j["provenance"] = {{"config_hash", result.config_hash},
                     {"base_seed", result.base_seed},
                     {"tool_version", result.tool_version},
                     {"axis", axis_name(plan.axis)}};
  for (const auto& pt : result.points) {
    nlohmann::json jp;
    jp["axis_value"] = round9(pt.axis_value);
    for (const auto& cell : pt.cells) {
      nlohmann::json jc;
      jc["algorithm"] = algorithm_name(cell.algorithm);
      jc["architecture"] = architecture_name(cell.architecture);
      jc["mean_ee_bits_per_joule"] = round9(cell.stats.mean_ee);
      jc["std_ee"] = round9(cell.stats.std_ee);
      jc["mean_se_bps_per_hz"] = round9(cell.stats.mean_se);
      jc["feasibility_rate"] = round9(cell.stats.feasibility_rate);
      jc["mean_solver_iters"] = round9(cell.stats.mean_solver_iters);
      jc["feasible_drops"] = cell.stats.feasible_drops;
      jc["total_drops"] = cell.stats.total_drops;
      for (const auto& d : cell.drops) {
        jc["drops"].push_back({{"seed", d.seed},
                               {"drop_hash", d.drop_hash},
                               {"feasible", d.feasible},
                               {"ee_bits_per_joule", round9(d.ee_bits_per_joule)},
                               {"se_bps_per_hz", round9(d.se_bps_per_hz)},
                               {"dinkelbach_iters", d.dinkelbach_iters},
                               {"dual_iters", d.dual_iters}});
      }
      jp["cells"].push_back(std::move(jc));
    }
    j["points"].push_back(std::move(jp));
  }
  return j.dump(2);
}

void emit_results(const SweepResult& result, const ExperimentPlan& plan, ResultFormat format,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << (format == ResultFormat::CSV ? results_to_csv(result)
                                      : results_to_json(result, plan));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hcran
