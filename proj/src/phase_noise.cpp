// SPDX-License-Identifier: Apache-2.0
#include "mmw/phase_noise.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mmw/fft.hpp"

namespace mmw {

void validate(const PhaseNoiseModel& model) {
  if (!(model.ref_carrier_hz > 0.0))
    throw ConfigError("phase noise model '" + model.name + "': ref_carrier_hz must be positive");
  for (const auto& c : model.components) {
    for (const auto& z : c.zeros)
      if (!(z.freq_hz > 0.0))
        throw ConfigError("phase noise model '" + model.name + "': zero frequency must be > 0");
    for (const auto& p : c.poles)
      if (!(p.freq_hz > 0.0))
        throw ConfigError("phase noise model '" + model.name + "': pole frequency must be > 0");
  }
}

double psd_linear(const PhaseNoiseModel& model, double f_offset_hz) {
  if (!(f_offset_hz > 0.0)) throw ConfigError("psd: frequency offset must be positive");
  double total = 0.0;
  for (const auto& c : model.components) {
    double s = std::pow(10.0, c.psd0_dbc_hz / 10.0);
    if (s == 0.0) continue;
    for (const auto& z : c.zeros) s *= 1.0 + std::pow(f_offset_hz / z.freq_hz, z.exponent);
    for (const auto& p : c.poles) s /= 1.0 + std::pow(f_offset_hz / p.freq_hz, p.exponent);
    total += s;
  }
  return total;
}

double psd_dbc_hz(const PhaseNoiseModel& model, double f_offset_hz) {
  return 10.0 * std::log10(psd_linear(model, f_offset_hz));
}

PhaseNoiseModel scale_to_carrier(PhaseNoiseModel model, double new_carrier_hz) {
  if (!(new_carrier_hz > 0.0)) throw ConfigError("scale_to_carrier: carrier must be positive");
  validate(model);
  const double shift_db = 20.0 * std::log10(new_carrier_hz / model.ref_carrier_hz);
  for (auto& c : model.components) c.psd0_dbc_hz += shift_db;
  model.ref_carrier_hz = new_carrier_hz;
  return model;
}

double highest_corner_hz(const PhaseNoiseModel& model) {
  double f = 0.0;
  for (const auto& c : model.components) {
    for (const auto& z : c.zeros) f = std::max(f, z.freq_hz);
    for (const auto& p : c.poles) f = std::max(f, p.freq_hz);
  }
  return f;
}

PhaseNoiseSynthesizer::PhaseNoiseSynthesizer(const PhaseNoiseModel& model, std::size_t n,
                                             double fs_hz)
    : n_(n), fs_hz_(fs_hz) {
  validate(model);
  if (!dsp::is_power_of_two(n) || n < (std::size_t{1} << 14))
    throw ConfigError("phase noise synthesis: n=" + std::to_string(n) +
                      " must be a power of two >= 16384");
  if (!(fs_hz > 0.0)) throw ConfigError("phase noise synthesis: fs must be positive");
  const double corner = highest_corner_hz(model);
  if (fs_hz <= 2.0 * corner) {
    std::ostringstream msg;
    msg << "sampling rate " << fs_hz << " Hz does not exceed twice the highest model corner "
        << corner << " Hz; spectrum above fs/2 is discarded";
    warnings_.push_back(msg.str());
  }
  const double df = fs_hz / static_cast<double>(n);
  bin_std_.assign(n / 2 + 1, 0.0);
  for (std::size_t k = 1; k <= n / 2; ++k)
    bin_std_[k] = std::sqrt(psd_linear(model, static_cast<double>(k) * df) * df);
}

PhaseTrajectory PhaseNoiseSynthesizer::generate(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const std::size_t half = n_ / 2;
  CVec spectrum(n_);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 1; k < half; ++k) {
    const double a = gauss(rng);
    const double b = gauss(rng);
    const cplx v = bin_std_[k] * inv_sqrt2 * cplx(a, b);
    spectrum[k] = v;
    spectrum[n_ - k] = std::conj(v);
  }
  spectrum[half] = bin_std_[half] * gauss(rng);

  CVec time(n_);
  dsp::ifft(spectrum, time);
  PhaseTrajectory traj;
  traj.fs_hz = fs_hz_;
  traj.warnings = warnings_;
  traj.phase_rad.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) traj.phase_rad[i] = time[i].real();
  return traj;
}

PhaseTrajectory generate(const PhaseNoiseModel& model, std::size_t n, double fs_hz,
                         std::uint64_t seed) {
  return PhaseNoiseSynthesizer(model, n, fs_hz).generate(seed);
}

void apply_in_place(std::span<cplx> samples, std::span<const double> phase_rad) {
  if (samples.size() != phase_rad.size())
    throw ConfigError("phase noise apply: " + std::to_string(samples.size()) + " samples vs " +
                      std::to_string(phase_rad.size()) + " phase values");
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] *= std::polar(1.0, phase_rad[i]);
}

CVec apply(std::span<const cplx> samples, const PhaseTrajectory& traj) {
  CVec out(samples.begin(), samples.end());
  apply_in_place(out, traj.phase_rad);
  return out;
}

namespace {

using nlohmann::json;

std::vector<PoleZero> parse_corners(const json& arr, const char* what) {
  std::vector<PoleZero> out;
  if (arr.is_null()) return out;
  if (!arr.is_array()) throw ConfigError(std::string("phase noise model: '") + what + "' must be an array");
  for (const auto& e : arr) {
    PoleZero pz;
    pz.freq_hz = e.at("freq_hz").get<double>();
    pz.exponent = e.at("exponent").get<double>();
    out.push_back(pz);
  }
  return out;
}

json corners_to_json(const std::vector<PoleZero>& v) {
  json arr = json::array();
  for (const auto& pz : v) arr.push_back({{"freq_hz", pz.freq_hz}, {"exponent", pz.exponent}});
  return arr;
}

}  // namespace

PhaseNoiseModel parse_phase_noise_model(const std::string& json_text) {
  PhaseNoiseModel model;
  try {
    const json j = json::parse(json_text, nullptr, true, true);
    model.name = j.value("name", std::string{});
    model.ref_carrier_hz = j.at("ref_carrier_hz").get<double>();
    for (const auto& jc : j.at("components")) {
      PsdComponent c;
      c.label = jc.value("label", std::string{});
      const auto& p0 = jc.at("psd0_dbc_hz");
      c.psd0_dbc_hz = p0.is_null() ? -std::numeric_limits<double>::infinity() : p0.get<double>();
      c.zeros = parse_corners(jc.value("zeros", json::array()), "zeros");
      c.poles = parse_corners(jc.value("poles", json::array()), "poles");
      model.components.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("phase noise model: ") + e.what());
  }
  validate(model);
  return model;
}

PhaseNoiseModel load_phase_noise_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open phase noise model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_phase_noise_model(ss.str());
}

std::string to_json(const PhaseNoiseModel& model) {
  json j;
  j["name"] = model.name;
  j["ref_carrier_hz"] = model.ref_carrier_hz;
  j["components"] = json::array();
  for (const auto& c : model.components) {
    json jc;
    jc["label"] = c.label;
    jc["psd0_dbc_hz"] = std::isfinite(c.psd0_dbc_hz) ? json(c.psd0_dbc_hz) : json(nullptr);
    jc["zeros"] = corners_to_json(c.zeros);
    jc["poles"] = corners_to_json(c.poles);
    j["components"].push_back(jc);
  }
  return j.dump(2);
}

PhaseNoiseModel builtin_phase_noise_model(const std::string& name) {
  // PLL-based centralized-LO synthesizers referenced to 30 GHz: reference clock
  // (close-in, filtered by the loop), PLL in-band noise, loop-shaped VCO, white floor.
  if (name == "ue_cmos") {
    return {"ue_cmos", 30e9,
            {{"reference", -68.0, {}, {{5e3, 2.0}, {187e3, 2.0}}},
             {"pll", -85.0, {}, {{187e3, 4.0}}},
             {"vco", -116.0, {{8e3, 2.0}}, {{187e3, 2.0}, {187e3, 2.0}}},
             {"floor", -155.0, {}, {}}}};
  }
  if (name == "bs_gaas") {
    return {"bs_gaas", 30e9,
            {{"reference", -70.0, {}, {{4e3, 2.0}, {112e3, 2.0}}},
             {"pll", -87.0, {}, {{112e3, 4.0}}},
             {"vco", -114.0, {{6e3, 2.0}}, {{112e3, 2.0}, {112e3, 2.0}}},
             {"floor", -158.0, {}, {}}}};
  }
  throw ConfigError("unknown built-in phase noise model '" + name + "'");
}

}  // namespace mmw
