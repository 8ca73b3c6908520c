// SPDX-License-Identifier: Apache-2.0
#include "mmw/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace mmw {
namespace {

constexpr int kSinusoidsPerTap = 16;

double rms_of(const std::vector<double>& delays_s, const std::vector<double>& powers) {
  double p = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    p += powers[i];
    m1 += powers[i] * delays_s[i];
    m2 += powers[i] * delays_s[i] * delays_s[i];
  }
  if (p <= 0.0) return 0.0;
  m1 /= p;
  m2 /= p;
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

std::size_t gain_stride(double fs_hz, double fd_hz) {
  if (fd_hz <= 0.0) return 256;
  const double s = fs_hz / (200.0 * fd_hz);
  return static_cast<std::size_t>(std::clamp(s, 1.0, 256.0));
}

}  // namespace

cplx ChannelRealization::gain(std::size_t tap, std::size_t n) const {
  const CVec& g = gains[tap];
  const std::size_t k = n / stride;
  if (k + 1 >= g.size()) return g.back();
  const double frac = static_cast<double>(n - k * stride) / static_cast<double>(stride);
  return g[k] + (g[k + 1] - g[k]) * frac;
}

double ChannelRealization::rms_delay_spread_s(double fs_hz) const {
  std::vector<double> d(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) d[i] = delays[i] / fs_hz;
  return rms_of(d, powers);
}

double max_doppler(double speed_mps, double carrier_hz) {
  if (speed_mps < 0.0 || carrier_hz < 0.0) throw ConfigError("max_doppler: negative input");
  return speed_mps * carrier_hz / kSpeedOfLight;
}

ChannelRealization build_tdl(const ChannelConfig& cfg, double fs_hz, std::size_t n_samples,
                             std::uint64_t seed) {
  if (cfg.n_taps < 1) throw ConfigError("tdl: n_taps must be >= 1");
  if (!(fs_hz > 0.0)) throw ConfigError("tdl: fs must be positive");
  if (cfg.rms_delay_spread_s < 0.0) throw ConfigError("tdl: negative delay spread");

  const bool pure_los = std::isinf(cfg.rician_k_db) && cfg.rician_k_db > 0.0;
  const double k_lin = pure_los ? 0.0 : db_to_linear(cfg.rician_k_db);
  const double los_power = pure_los ? 1.0 : k_lin / (k_lin + 1.0);
  const double nlos_power = 1.0 - los_power;

  // Exponential NLOS profile decaying by e^-1 every n_taps/4 taps.
  const double decay = std::max(1.0, cfg.n_taps / 4.0);
  std::vector<double> rel(cfg.n_taps);
  for (int i = 0; i < cfg.n_taps; ++i) rel[i] = std::exp(-i / decay);
  const double rel_sum = std::accumulate(rel.begin(), rel.end(), 0.0);
  std::vector<double> tap_power(cfg.n_taps);
  for (int i = 0; i < cfg.n_taps; ++i) tap_power[i] = nlos_power * rel[i] / rel_sum;
  tap_power[0] += los_power;

  ChannelRealization ch;
  ch.n_samples = n_samples;

  // Tap spacing scaled so the quantized profile hits the target RMS delay spread.
  std::vector<double> unit(cfg.n_taps);
  std::iota(unit.begin(), unit.end(), 0.0);
  const double rms_unit = rms_of(unit, tap_power);
  std::vector<int> tap_delay(cfg.n_taps, 0);
  std::map<int, double> merged;  // delay -> power
  auto quantize = [&](double spacing) {
    merged.clear();
    for (int i = 0; i < cfg.n_taps; ++i) {
      tap_delay[i] = static_cast<int>(std::lround(i * spacing * fs_hz));
      merged[tap_delay[i]] += tap_power[i];
    }
  };
  if (rms_unit > 0.0 && cfg.rms_delay_spread_s > 0.0) {
    double spacing = cfg.rms_delay_spread_s / rms_unit;
    for (int iter = 0; iter < 20; ++iter) {
      quantize(spacing);
      std::vector<double> d;
      std::vector<double> p;
      for (auto [dl, pw] : merged) {
        d.push_back(dl / fs_hz);
        p.push_back(pw);
      }
      const double got = rms_of(d, p);
      if (got <= 0.0 || std::abs(got / cfg.rms_delay_spread_s - 1.0) < 1e-3) break;
      spacing *= cfg.rms_delay_spread_s / got;
    }
    if (merged.size() == 1 && cfg.n_taps > 1)
      ch.warnings.push_back("delay spread unresolvable at fs; using a flat channel");
  } else {
    quantize(0.0);
  }

  // Taps that quantize onto the same delay add their independent Rayleigh processes.
  const double fd = max_doppler(cfg.ue_speed_mps, cfg.carrier_hz);
  ch.stride = gain_stride(fs_hz, fd);
  const std::size_t n_points = n_samples / ch.stride + 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::map<int, std::size_t> slot_of;
  for (auto [dl, pw] : merged) {
    slot_of[dl] = ch.delays.size();
    ch.delays.push_back(dl);
    ch.powers.push_back(pw);
    ch.gains.emplace_back(n_points);
  }
  const double dt = static_cast<double>(ch.stride) / fs_hz;
  for (int i = 0; i < cfg.n_taps; ++i) {
    CVec& g = ch.gains[slot_of.at(tap_delay[i])];
    const double p_nlos = nlos_power * rel[i] / rel_sum;
    if (p_nlos > 0.0) {
      const double amp = std::sqrt(p_nlos / kSinusoidsPerTap);
      for (int m = 0; m < kSinusoidsPerTap; ++m) {
        const double alpha = 2.0 * kPi * (m + uni(rng)) / kSinusoidsPerTap;
        const double phi0 = 2.0 * kPi * uni(rng);
        const double w = 2.0 * kPi * fd * std::cos(alpha) * dt;
        for (std::size_t k = 0; k < n_points; ++k) g[k] += std::polar(amp, phi0 + w * static_cast<double>(k));
      }
    }
    if (i == 0 && los_power > 0.0) {
      const double theta = 2.0 * kPi * uni(rng);
      const double phi0 = 2.0 * kPi * uni(rng);
      const double w = 2.0 * kPi * fd * std::cos(theta) * dt;
      const double amp = std::sqrt(los_power);
      for (std::size_t k = 0; k < n_points; ++k) g[k] += std::polar(amp, phi0 + w * static_cast<double>(k));
    }
  }
  return ch;
}

ChannelRealization static_channel(std::vector<int> delays, CVec gains, std::size_t n_samples) {
  if (delays.size() != gains.size() || delays.empty())
    throw ConfigError("static_channel: delays and gains must be non-empty and equally sized");
  ChannelRealization ch;
  ch.n_samples = n_samples;
  ch.stride = std::max<std::size_t>(n_samples, 1);
  double total = 0.0;
  for (const auto& g : gains) total += std::norm(g);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    ch.delays.push_back(delays[i]);
    ch.powers.push_back(total > 0.0 ? std::norm(gains[i]) / total : 0.0);
    ch.gains.push_back(CVec{gains[i], gains[i]});
  }
  return ch;
}

CVec propagate(std::span<const cplx> samples, const ChannelRealization& ch) {
  if (ch.n_samples < samples.size())
    throw ConfigError("propagate: realization covers " + std::to_string(ch.n_samples) +
                      " samples, input has " + std::to_string(samples.size()));
  CVec out(samples.size());
  for (std::size_t tap = 0; tap < ch.n_taps(); ++tap) {
    const auto d = static_cast<std::size_t>(ch.delays[tap]);
    for (std::size_t n = d; n < samples.size(); ++n) out[n] += ch.gain(tap, n) * samples[n - d];
  }
  return out;
}

CVec frequency_response(const ChannelRealization& ch, std::size_t at_sample, const SubcarrierMap& map) {
  CVec h(map.width());
  const double n = map.fft_size();
  for (std::size_t tap = 0; tap < ch.n_taps(); ++tap) {
    const cplx g = ch.gain(tap, at_sample);
    for (int j = 0; j < map.width(); ++j)
      h[j] += g * std::polar(1.0, -2.0 * kPi * map.offset(j) * ch.delays[tap] / n);
  }
  return h;
}

void add_awgn(std::span<cplx> samples, double snr_db, double signal_power_ref, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0.0) return;
  const double var = signal_power_ref / db_to_linear(snr_db);
  const double sigma = std::sqrt(var / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (auto& s : samples) {
    const double a = gauss(rng);
    const double b = gauss(rng);
    s += sigma * cplx(a, b);
  }
}

CVec awgn(std::span<const cplx> samples, double snr_db, double signal_power_ref, std::uint64_t seed) {
  CVec out(samples.begin(), samples.end());
  add_awgn(out, snr_db, signal_power_ref, seed);
  return out;
}

}  // namespace mmw
