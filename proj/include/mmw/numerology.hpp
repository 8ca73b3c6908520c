// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mmw/types.hpp"

namespace mmw {

inline constexpr int kSubcarriersPerPrb = 12;
inline constexpr int kMaxPrb = 264;
inline constexpr int kMinMu = 3;
inline constexpr int kMaxMu = 8;

/// Subcarrier spacing exponent and allocation; SCS = 15 kHz * 2^mu.
struct NumerologyConfig {
  int mu = 3;
  int fft_size = 4096;
  int n_prb = kMaxPrb;
  int symbols_per_slot = 14;
};

struct NumerologyDerived {
  NumerologyConfig cfg;
  double scs_hz = 0.0;
  double sampling_rate_hz = 0.0;
  double slot_duration_s = 0.0;
  double symbol_duration_s = 0.0;  // useful part, fft_size / fs
  int cp_samples = 0;
  double allocation_bw_hz = 0.0;
  double channel_bw_hz = 0.0;

  int active_subcarriers() const { return kSubcarriersPerPrb * cfg.n_prb; }
  int samples_per_symbol() const { return cfg.fft_size + cp_samples; }
  int samples_per_slot() const { return cfg.symbols_per_slot * samples_per_symbol(); }
};

/// Checks mu, n_prb and FFT fit. Throws ConfigError naming the violated bound.
void validate(const NumerologyConfig& cfg);

NumerologyDerived derive(const NumerologyConfig& cfg);

/// CP length: 288 samples at FFT size 4096, scaled proportionally for other sizes.
int cp_samples_for(int fft_size);

/// Nominal slot duration from the 2^-mu scaling law (125 us at mu = 3).
double nominal_slot_duration_s(int mu);

/// Maximum channel bandwidth for the beyond-52.6 GHz numerologies (mu = 3..8).
double max_channel_bw_hz(int mu);

/// Uncoded air bit rate of one rank-1 layer over the allocation.
double phy_bit_rate(const NumerologyDerived& d, int qm, int data_symbols, double ptrs_overhead);

}  // namespace mmw
