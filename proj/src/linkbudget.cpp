// SPDX-License-Identifier: Apache-2.0
#include "mmw/linkbudget.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mmw/csv.hpp"
#include <json.hpp>

namespace mmw {

using nlohmann::json;

PathLossModel parse_path_loss_model(const std::string& name) {
  if (name == "umi_los") return PathLossModel::umi_los;
  if (name == "umi_nlos") return PathLossModel::umi_nlos;
  throw ConfigError("unknown path-loss model '" + name + "' (expected umi_los or umi_nlos)");
}

std::string to_string(PathLossModel m) { return m == PathLossModel::umi_los ? "umi_los" : "umi_nlos"; }

void validate(const LinkBudgetScenario& s) {
  if (s.tx.n_elements < 1) throw ConfigError("tx.n_elements must be >= 1");
  if (s.rx.n_elements < 1) throw ConfigError("rx.n_elements must be >= 1");
  if (s.tx.backoff_db < 0.0) throw ConfigError("tx.backoff_db must be >= 0");
  if (!(s.bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be > 0");
  if (!(s.carrier_hz > 0.0)) throw ConfigError("carrier_hz must be > 0");
  if (s.gas_atten_db_per_km < 0.0) throw ConfigError("gas_atten_db_per_km must be >= 0");
}

double element_power_dbm(const TxChain& tx) { return tx.pa_sat_dbm - tx.backoff_db; }

double unconstrained_eirp_dbm(const LinkBudgetScenario& s) {
  return element_power_dbm(s.tx) + 20.0 * std::log10(static_cast<double>(s.tx.n_elements)) +
         s.tx.element_gain_dbi;
}

double eirp_dbm(const LinkBudgetScenario& s) {
  const double e = unconstrained_eirp_dbm(s);
  return s.eirp_limit_dbm ? std::min(e, *s.eirp_limit_dbm) : e;
}

bool eirp_capped(const LinkBudgetScenario& s) {
  return s.eirp_limit_dbm && unconstrained_eirp_dbm(s) > *s.eirp_limit_dbm;
}

double rx_array_gain_db(const RxChain& rx) {
  return 10.0 * std::log10(static_cast<double>(rx.n_elements)) + rx.element_gain_dbi;
}

double noise_floor_dbm(const LinkBudgetScenario& s) {
  return -174.0 + 10.0 * std::log10(s.bandwidth_hz) + s.rx.nf0_db +
         s.rx.nf_slope_db_per_ghz * (s.bandwidth_hz / 1e9);
}

namespace {

constexpr double kBsHeight = 10.0;
constexpr double kUtHeight = 1.5;
constexpr double kEffectiveEnvHeight = 1.0;

}  // namespace

double umi_breakpoint_m(double carrier_hz) {
  // The tabulated model uses c = 3e8 m/s.
  return 4.0 * (kBsHeight - kEffectiveEnvHeight) * (kUtHeight - kEffectiveEnvHeight) * carrier_hz / 3.0e8;
}

double path_loss_db(PathLossModel model, double distance_m, double carrier_hz,
                    std::vector<std::string>* warnings) {
  if (distance_m < 1.0) {
    if (warnings) warnings->push_back("distance " + std::to_string(distance_m) + " m clamped to 1 m");
    distance_m = 1.0;
  }
  const double f_ghz = carrier_hz / 1e9;
  const double dbp = umi_breakpoint_m(carrier_hz);
  double los;
  if (distance_m <= dbp) {
    los = 32.4 + 21.0 * std::log10(distance_m) + 20.0 * std::log10(f_ghz);
  } else {
    const double dh = kBsHeight - kUtHeight;
    los = 32.4 + 40.0 * std::log10(distance_m) + 20.0 * std::log10(f_ghz) -
          9.5 * std::log10(dbp * dbp + dh * dh);
  }
  if (model == PathLossModel::umi_los) return los;
  const double nlos = 35.3 * std::log10(distance_m) + 22.4 + 21.3 * std::log10(f_ghz) -
                      0.3 * (kUtHeight - 1.5);
  return std::max(los, nlos);
}

double link_margin_db(const LinkBudgetScenario& s, double distance_m) {
  return eirp_dbm(s) + rx_array_gain_db(s.rx) - path_loss_db(s.pathloss_model, distance_m, s.carrier_hz) -
         s.gas_atten_db_per_km * distance_m / 1000.0 - s.margins_db - noise_floor_dbm(s) - s.required_snr_db;
}

double max_link_distance(const LinkBudgetScenario& s) {
  validate(s);
  const double m1 = link_margin_db(s, 1.0);
  if (m1 < 0.0) {
    std::ostringstream os;
    os << "link '" << s.name << "' does not close at 1 m: deficit " << -m1 << " dB";
    throw RuntimeError(os.str());
  }
  double lo = 1.0;
  double hi = 2.0;
  while (link_margin_db(s, hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e7) throw RuntimeError("link '" + s.name + "' still closes beyond 10000 km");
  }
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    (link_margin_db(s, mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

double lookup_required_snr(const json& spec, const std::filesystem::path& base_dir) {
  if (spec.is_number()) return spec.get<double>();
  if (!spec.is_object() || !spec.contains("table") || !spec.contains("label"))
    throw ConfigError("required_snr_db must be a number or {table, label}");
  const auto path = base_dir / spec.at("table").get<std::string>();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open required-SNR table " + path.string());
  const CsvTable t = read_csv(in);
  const std::string label = spec.at("label").get<std::string>();
  const std::size_t lc = t.column("label");
  const std::size_t vc = t.column("required_snr_db");
  for (const auto& row : t.rows) {
    if (row[lc] != label) continue;
    if (row[vc] == "unreachable" || row[vc].empty())
      throw ConfigError("required SNR for '" + label + "' is unreachable");
    return std::stod(row[vc]);
  }
  throw ConfigError("label '" + label + "' not found in " + path.string());
}

}  // namespace

std::vector<LinkCase> parse_link_scenarios(const std::string& json_text,
                                           const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file is not valid JSON: ") + e.what());
  }
  if (!root.contains("scenarios") || !root.at("scenarios").is_array() || root.at("scenarios").empty())
    throw ConfigError("scenario file needs a non-empty 'scenarios' array");

  std::vector<LinkCase> out;
  try {
    for (const auto& sc : root.at("scenarios")) {
      json cfg = root;
      cfg.erase("scenarios");
      cfg.merge_patch(sc);
      const std::string name = cfg.value("name", std::string("scenario"));

      std::vector<std::string> dirs{"UL", "DL"};
      read_opt(cfg, "directions", dirs);
      if (!cfg.contains("waveforms") || !cfg.at("waveforms").is_object())
        throw ConfigError("scenario '" + name + "' needs a 'waveforms' object");

      for (const auto& dir : dirs) {
        if (dir != "UL" && dir != "DL") throw ConfigError("direction must be UL or DL, got '" + dir + "'");
        const json& txn = cfg.at(dir == "UL" ? "ue" : "bs");
        const json& rxn = cfg.at(dir == "UL" ? "bs" : "ue");
        for (const auto& [wf, wcfg] : cfg.at("waveforms").items()) {
          if (wf != "ofdm" && wf != "dfts") throw ConfigError("waveform must be ofdm or dfts, got '" + wf + "'");
          LinkCase c{name, dir, wf, {}};
          auto& b = c.budget;
          b.name = name + "/" + dir + "/" + wf;
          read_opt(cfg, "carrier_hz", b.carrier_hz);
          read_opt(cfg, "bandwidth_hz", b.bandwidth_hz);
          read_opt(cfg, "gas_atten_db_per_km", b.gas_atten_db_per_km);
          read_opt(cfg, "margins_db", b.margins_db);
          if (cfg.contains("eirp_limit_dbm") && !cfg.at("eirp_limit_dbm").is_null())
            b.eirp_limit_dbm = cfg.at("eirp_limit_dbm").get<double>();
          if (cfg.contains("pathloss_model"))
            b.pathloss_model = parse_path_loss_model(cfg.at("pathloss_model").get<std::string>());
          read_opt(txn, "n_elements", b.tx.n_elements);
          read_opt(txn, "pa_sat_dbm", b.tx.pa_sat_dbm);
          read_opt(txn, "element_gain_dbi", b.tx.element_gain_dbi);
          read_opt(rxn, "n_elements", b.rx.n_elements);
          read_opt(rxn, "element_gain_dbi", b.rx.element_gain_dbi);
          read_opt(rxn, "nf0_db", b.rx.nf0_db);
          read_opt(rxn, "nf_slope_db_per_ghz", b.rx.nf_slope_db_per_ghz);
          read_opt(wcfg, "backoff_db", b.tx.backoff_db);
          if (!wcfg.contains("required_snr_db"))
            throw ConfigError("waveform '" + wf + "' in scenario '" + name + "' needs required_snr_db");
          b.required_snr_db = lookup_required_snr(wcfg.at("required_snr_db"), base_dir);
          validate(b);
          out.push_back(std::move(c));
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  }
  return out;
}

std::vector<LinkCase> load_link_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_link_scenarios(ss.str(), path.parent_path());
}

std::vector<LinkResult> evaluate_links(const std::vector<LinkCase>& cases) {
  std::vector<LinkResult> out;
  out.reserve(cases.size());
  for (const auto& c : cases)
    out.push_back({c, max_link_distance(c.budget), eirp_capped(c.budget) ? "eirp_limit" : "pa"});
  return out;
}

}  // namespace mmw
