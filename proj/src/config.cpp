// SPDX-License-Identifier: Apache-2.0
#include "mmw/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mmw/codec.hpp"

namespace mmw {

using nlohmann::json;

Waveform parse_waveform(const std::string& s) {
  if (s == "ofdm" || s == "cp-ofdm") return Waveform::ofdm;
  if (s == "dfts" || s == "dft-s-ofdm") return Waveform::dfts;
  throw ConfigError("unknown waveform '" + s + "' (expected ofdm or dfts)");
}

std::string to_string(Waveform w) { return w == Waveform::ofdm ? "ofdm" : "dfts"; }

PnCompensation parse_pn_compensation(const std::string& s) {
  if (s == "auto") return PnCompensation::automatic;
  if (s == "none") return PnCompensation::none;
  if (s == "cpe") return PnCompensation::cpe;
  if (s == "interp") return PnCompensation::interp;
  if (s == "ici") return PnCompensation::ici;
  if (s == "genie-best") return PnCompensation::genie_best;
  throw ConfigError("unknown PN compensation '" + s + "' (expected auto, none, cpe, interp, ici, genie-best)");
}

std::string to_string(PnCompensation p) {
  switch (p) {
    case PnCompensation::automatic: return "auto";
    case PnCompensation::none: return "none";
    case PnCompensation::cpe: return "cpe";
    case PnCompensation::interp: return "interp";
    case PnCompensation::ici: return "ici";
    case PnCompensation::genie_best: return "genie-best";
  }
  return "?";
}

Metric parse_metric(const std::string& s) {
  if (s == "bler") return Metric::bler;
  if (s == "ser") return Metric::ser;
  throw ConfigError("unknown metric '" + s + "' (expected bler or ser)");
}

std::string to_string(Metric m) { return m == Metric::bler ? "bler" : "ser"; }

PnCompensation resolved_pn_compensation(const SimConfig& cfg) {
  if (cfg.rx.pn_compensation != PnCompensation::automatic) return cfg.rx.pn_compensation;
  if (!cfg.ptrs) return PnCompensation::none;
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OfdmDistributed>) return PnCompensation::cpe;
        else if constexpr (std::is_same_v<T, OfdmBlock>) return PnCompensation::ici;
        else return PnCompensation::genie_best;
      },
      *cfg.ptrs);
}

void validate(const SimConfig& cfg) {
  validate(cfg.numerology);
  if (cfg.numerology.symbols_per_slot < 3)
    throw ConfigError("symbols_per_slot must be >= 3 (control, DMRS and at least one data symbol)");
  const int m = kSubcarriersPerPrb * cfg.numerology.n_prb;
  if (cfg.ptrs) {
    validate(*cfg.ptrs, m);
    const bool pre_dft = ptrs_domain(*cfg.ptrs) == PtrsDomain::pre_dft;
    if (pre_dft != (cfg.waveform == Waveform::dfts))
      throw ConfigError("PTRS '" + ptrs_name(*cfg.ptrs) + "' does not apply to waveform " +
                        to_string(cfg.waveform));
  }
  const PnCompensation comp = resolved_pn_compensation(cfg);
  const bool block = cfg.ptrs && std::holds_alternative<OfdmBlock>(*cfg.ptrs);
  switch (comp) {
    case PnCompensation::automatic:
    case PnCompensation::none:
      break;
    case PnCompensation::cpe:
      if (!cfg.ptrs) throw ConfigError("cpe compensation needs a PTRS configuration");
      break;
    case PnCompensation::ici:
      if (!block) throw ConfigError("ici compensation needs block PTRS");
      break;
    case PnCompensation::interp:
    case PnCompensation::genie_best:
      if (!cfg.ptrs || cfg.waveform != Waveform::dfts)
        throw ConfigError(to_string(comp) + " compensation needs DFT-s-OFDM group PTRS");
      break;
  }
  if (cfg.rx.ici_order < 0) throw ConfigError("ici_order must be >= 0");
  if (block) {
    const int width = kSubcarriersPerPrb * std::get<OfdmBlock>(*cfg.ptrs).block_prbs;
    if (width < 2 * (2 * cfg.rx.ici_order + 1))
      throw ConfigError("block PTRS of " + std::to_string(width) + " subcarriers is too narrow for ici_order " +
                        std::to_string(cfg.rx.ici_order));
  }
  if (cfg.rx.smoothing_window < 1) throw ConfigError("smoothing_window must be >= 1");
  make_codec(cfg.rx.codec);
  if (cfg.snr_db.empty()) throw ConfigError("SNR grid is empty");
  for (double s : cfg.snr_db)
    if (std::isnan(s)) throw ConfigError("SNR grid contains NaN");
  if (cfg.stop.min_block_errors < 1) throw ConfigError("stop.min_block_errors must be >= 1");
  if (cfg.stop.max_trials < 1) throw ConfigError("stop.max_trials must be >= 1");
  if (cfg.channel.n_taps < 1) throw ConfigError("channel.n_taps must be >= 1");
  if (cfg.channel.rms_delay_spread_s < 0.0) throw ConfigError("channel delay spread must be >= 0");
  if (cfg.channel.ue_speed_mps < 0.0) throw ConfigError("channel UE speed must be >= 0");
  if (cfg.pn.enabled) {
    validate(cfg.pn.tx);
    validate(cfg.pn.rx);
    if (!(cfg.pn.carrier_hz > 0.0)) throw ConfigError("phase_noise.carrier_hz must be > 0");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
}

namespace {

json ptrs_to_json(const PtrsConfig& p) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, OfdmDistributed>)
          return {{"type", "distributed"}, {"every_nth_prb", c.every_nth_prb}, {"time_density", c.time_density}};
        else if constexpr (std::is_same_v<T, OfdmBlock>)
          return {{"type", "block"}, {"block_prbs", c.block_prbs}};
        else if constexpr (std::is_same_v<T, DftsGroups>)
          return {{"type", "groups"}, {"n_groups", c.n_groups}, {"samples_per_group", c.samples_per_group}};
        else
          return {{"type", "groups12"}};
      },
      p);
}

PtrsConfig ptrs_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "distributed") {
    OfdmDistributed c;
    c.every_nth_prb = j.value("every_nth_prb", c.every_nth_prb);
    c.time_density = j.value("time_density", c.time_density);
    return c;
  }
  if (type == "block") {
    OfdmBlock c;
    c.block_prbs = j.value("block_prbs", c.block_prbs);
    return c;
  }
  if (type == "groups") {
    DftsGroups c;
    c.n_groups = j.value("n_groups", c.n_groups);
    c.samples_per_group = j.value("samples_per_group", c.samples_per_group);
    return c;
  }
  if (type == "groups12") return DftsEnhanced{};
  throw ConfigError("unknown PTRS type '" + type + "' (expected distributed, block, groups, groups12)");
}

PhaseNoiseModel load_model_ref(const std::string& ref, const std::filesystem::path& base_dir) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.rfind(prefix, 0) == 0) return builtin_phase_noise_model(ref.substr(prefix.size()));
  return load_phase_noise_model(base_dir / ref);
}

std::vector<double> snr_grid_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_number()) return {j.get<double>()};
  const double start = j.at("start").get<double>();
  const double stop = j.at("stop").get<double>();
  const double step = j.at("step").get<double>();
  if (!(step > 0.0) || stop < start) throw ConfigError("snr_db range needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(start + i * step);
  return out;
}

SimConfig from_json(const json& j, const std::filesystem::path& base_dir) {
  SimConfig c;
  c.label = j.value("label", std::string{});
  if (j.contains("waveform")) c.waveform = parse_waveform(j.at("waveform").get<std::string>());
  if (j.contains("numerology")) {
    const auto& n = j.at("numerology");
    c.numerology.mu = n.value("mu", c.numerology.mu);
    c.numerology.fft_size = n.value("fft_size", c.numerology.fft_size);
    c.numerology.n_prb = n.value("n_prb", c.numerology.n_prb);
    c.numerology.symbols_per_slot = n.value("symbols_per_slot", c.numerology.symbols_per_slot);
  }
  if (j.contains("modulation")) c.modulation = parse_modulation(j.at("modulation").get<std::string>());
  if (j.contains("ptrs") && !j.at("ptrs").is_null()) c.ptrs = ptrs_from_json(j.at("ptrs"));
  if (j.contains("phase_noise")) {
    const auto& p = j.at("phase_noise");
    c.pn.enabled = p.value("enabled", false);
    c.pn.carrier_hz = p.value("carrier_hz", c.pn.carrier_hz);
    if (c.pn.enabled) {
      c.pn.tx = load_model_ref(p.value("tx", std::string("builtin:bs_gaas")), base_dir);
      c.pn.rx = load_model_ref(p.value("rx", std::string("builtin:ue_cmos")), base_dir);
    }
  }
  if (j.contains("channel")) {
    const auto& ch = j.at("channel");
    const std::string type = ch.value("type", std::string("awgn"));
    if (type == "awgn") c.channel_type = ChannelType::awgn;
    else if (type == "tdl") c.channel_type = ChannelType::tdl;
    else throw ConfigError("unknown channel type '" + type + "' (expected awgn or tdl)");
    c.channel.rms_delay_spread_s = ch.value("rms_delay_spread_ns", c.channel.rms_delay_spread_s * 1e9) * 1e-9;
    if (ch.contains("rician_k_db")) {
      const auto& k = ch.at("rician_k_db");
      c.channel.rician_k_db = k.is_null() ? std::numeric_limits<double>::infinity() : k.get<double>();
    }
    c.channel.n_taps = ch.value("n_taps", c.channel.n_taps);
    c.channel.ue_speed_mps = ch.value("ue_speed_kmh", c.channel.ue_speed_mps * 3.6) / 3.6;
    c.channel.carrier_hz = ch.value("carrier_hz", c.channel.carrier_hz);
  }
  if (j.contains("receiver")) {
    const auto& r = j.at("receiver");
    const std::string est = r.value("channel_estimation", std::string("genie"));
    if (est == "genie") c.rx.channel_estimation = ChannelEstimation::genie;
    else if (est == "ls") c.rx.channel_estimation = ChannelEstimation::ls;
    else throw ConfigError("unknown channel_estimation '" + est + "' (expected genie or ls)");
    c.rx.smoothing_window = r.value("smoothing_window", c.rx.smoothing_window);
    c.rx.pn_compensation = parse_pn_compensation(r.value("pn_compensation", std::string("auto")));
    c.rx.ici_order = r.value("ici_order", c.rx.ici_order);
    c.rx.codec = r.value("codec", c.rx.codec);
  }
  if (j.contains("snr_db")) c.snr_db = snr_grid_from_json(j.at("snr_db"));
  if (j.contains("stop")) {
    const auto& s = j.at("stop");
    c.stop.min_block_errors = s.value("min_block_errors", c.stop.min_block_errors);
    c.stop.max_trials = s.value("max_trials", c.stop.max_trials);
  }
  c.base_seed = j.value("seed", c.base_seed);
  c.workers = j.value("workers", c.workers);
  return c;
}

}  // namespace

std::string canonical_json(const SimConfig& c) {
  json j;
  j["label"] = c.label;
  j["waveform"] = to_string(c.waveform);
  j["numerology"] = {{"mu", c.numerology.mu},
                     {"fft_size", c.numerology.fft_size},
                     {"n_prb", c.numerology.n_prb},
                     {"symbols_per_slot", c.numerology.symbols_per_slot}};
  j["modulation"] = to_string(c.modulation);
  j["ptrs"] = c.ptrs ? ptrs_to_json(*c.ptrs) : json(nullptr);
  j["phase_noise"] = {{"enabled", c.pn.enabled}};
  if (c.pn.enabled) {
    j["phase_noise"]["carrier_hz"] = c.pn.carrier_hz;
    j["phase_noise"]["tx"] = json::parse(to_json(c.pn.tx));
    j["phase_noise"]["rx"] = json::parse(to_json(c.pn.rx));
  }
  j["channel"] = {{"type", c.channel_type == ChannelType::awgn ? "awgn" : "tdl"}};
  if (c.channel_type == ChannelType::tdl) {
    j["channel"]["rms_delay_spread_ns"] = c.channel.rms_delay_spread_s * 1e9;
    j["channel"]["rician_k_db"] =
        std::isfinite(c.channel.rician_k_db) ? json(c.channel.rician_k_db) : json(nullptr);
    j["channel"]["n_taps"] = c.channel.n_taps;
    j["channel"]["ue_speed_kmh"] = c.channel.ue_speed_mps * 3.6;
    j["channel"]["carrier_hz"] = c.channel.carrier_hz;
  }
  j["receiver"] = {{"channel_estimation", c.rx.channel_estimation == ChannelEstimation::genie ? "genie" : "ls"},
                   {"smoothing_window", c.rx.smoothing_window},
                   {"pn_compensation", to_string(c.rx.pn_compensation)},
                   {"ici_order", c.rx.ici_order},
                   {"codec", c.rx.codec}};
  j["snr_db"] = c.snr_db;
  j["stop"] = {{"min_block_errors", c.stop.min_block_errors}, {"max_trials", c.stop.max_trials}};
  j["seed"] = c.base_seed;
  return j.dump();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fingerprint(const SimConfig& cfg) { return fnv1a_hex(canonical_json(cfg)); }

SimConfig parse_sim_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  SimConfig c;
  try {
    c = from_json(json::parse(json_text), base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

SimFile parse_sim_file(const std::string& json_text, const std::filesystem::path& base_dir) {
  SimFile f;
  try {
    json root = json::parse(json_text);
    if (!root.is_object()) throw ConfigError("config file must hold a JSON object");
    if (root.contains("reqsnr")) {
      const auto& r = root.at("reqsnr");
      f.reqsnr.metric = parse_metric(r.value("metric", std::string("bler")));
      f.reqsnr.target = r.value("target", f.reqsnr.target);
      f.reqsnr.resolution_db = r.value("resolution_db", f.reqsnr.resolution_db);
      if (!(f.reqsnr.target > 0.0 && f.reqsnr.target < 1.0)) throw ConfigError("reqsnr.target must be in (0, 1)");
      if (!(f.reqsnr.resolution_db > 0.0)) throw ConfigError("reqsnr.resolution_db must be > 0");
    }
    if (root.contains("papr")) {
      const auto& p = root.at("papr");
      f.papr.symbols = p.value("symbols", f.papr.symbols);
      f.papr.oversample = p.value("oversample", f.papr.oversample);
      f.papr.thresholds_db = p.value("thresholds_db", std::vector<double>{});
      if (f.papr.symbols < 1) throw ConfigError("papr.symbols must be >= 1");
      if (f.papr.oversample < 1) throw ConfigError("papr.oversample must be >= 1");
    }
    json base = root;
    base.erase("cases");
    base.erase("reqsnr");
    base.erase("papr");
    if (root.contains("cases")) {
      if (!root.at("cases").is_array() || root.at("cases").empty())
        throw ConfigError("'cases' must be a non-empty array");
      for (const auto& over : root.at("cases")) {
        json j = base;
        j.merge_patch(over);
        f.cases.push_back(from_json(j, base_dir));
      }
    } else {
      f.cases.push_back(from_json(base, base_dir));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& c : f.cases) validate(c);
  return f;
}

SimFile load_sim_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sim_file(ss.str(), path.parent_path());
}

}  // namespace mmw
