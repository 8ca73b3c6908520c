// SPDX-License-Identifier: Apache-2.0
#include "mmw/numerology.hpp"

#include <array>
#include <cmath>
#include <string>

namespace mmw {

void validate(const NumerologyConfig& cfg) {
  if (cfg.mu < kMinMu || cfg.mu > kMaxMu)
    throw ConfigError("numerology: mu=" + std::to_string(cfg.mu) + " outside [" +
                      std::to_string(kMinMu) + ", " + std::to_string(kMaxMu) + "]");
  if (cfg.n_prb < 1 || cfg.n_prb > kMaxPrb)
    throw ConfigError("numerology: n_prb=" + std::to_string(cfg.n_prb) + " outside [1, " +
                      std::to_string(kMaxPrb) + "]");
  if (cfg.fft_size < 16)
    throw ConfigError("numerology: fft_size=" + std::to_string(cfg.fft_size) + " below 16");
  // +1 for the unused DC subcarrier.
  if (kSubcarriersPerPrb * cfg.n_prb + 1 > cfg.fft_size)
    throw ConfigError("numerology: 12*n_prb=" + std::to_string(kSubcarriersPerPrb * cfg.n_prb) +
                      " plus DC exceeds fft_size=" + std::to_string(cfg.fft_size));
  if (cfg.symbols_per_slot < 1)
    throw ConfigError("numerology: symbols_per_slot must be positive");
}

int cp_samples_for(int fft_size) {
  return static_cast<int>(std::lround(fft_size * 288.0 / 4096.0));
}

double nominal_slot_duration_s(int mu) { return 125e-6 * std::pow(2.0, -(mu - 3)); }

double max_channel_bw_hz(int mu) {
  static constexpr std::array<double, 6> kBwMHz{400, 800, 1600, 3200, 6400, 12800};
  if (mu < kMinMu || mu > kMaxMu) throw ConfigError("max_channel_bw_hz: mu out of range");
  return kBwMHz[static_cast<std::size_t>(mu - kMinMu)] * 1e6;
}

NumerologyDerived derive(const NumerologyConfig& cfg) {
  validate(cfg);
  NumerologyDerived d;
  d.cfg = cfg;
  d.scs_hz = 15e3 * std::pow(2.0, cfg.mu);
  d.sampling_rate_hz = d.scs_hz * cfg.fft_size;
  d.cp_samples = cp_samples_for(cfg.fft_size);
  d.symbol_duration_s = cfg.fft_size / d.sampling_rate_hz;
  d.slot_duration_s = cfg.symbols_per_slot * (cfg.fft_size + d.cp_samples) / d.sampling_rate_hz;
  d.allocation_bw_hz = kSubcarriersPerPrb * cfg.n_prb * d.scs_hz;
  d.channel_bw_hz = max_channel_bw_hz(cfg.mu);
  return d;
}

double phy_bit_rate(const NumerologyDerived& d, int qm, int data_symbols, double ptrs_overhead) {
  if (qm < 0) throw ConfigError("phy_bit_rate: qm must be non-negative");
  if (ptrs_overhead < 0.0 || ptrs_overhead >= 1.0)
    throw ConfigError("phy_bit_rate: ptrs_overhead must lie in [0, 1)");
  if (data_symbols < 1 || data_symbols > d.cfg.symbols_per_slot)
    throw ConfigError("phy_bit_rate: data_symbols must lie in [1, symbols_per_slot]");
  const double bits_per_slot =
      static_cast<double>(d.active_subcarriers()) * qm * data_symbols * (1.0 - ptrs_overhead);
  return bits_per_slot / d.slot_duration_s;
}

}  // namespace mmw
