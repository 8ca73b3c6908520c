// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "mmw/types.hpp"
#include "mmw/waveform.hpp"

namespace mmw {

/// SISO Rician tapped-delay-line stand-in for a strong-LOS clustered channel.
struct ChannelConfig {
  double rms_delay_spread_s = 10e-9;
  double rician_k_db = 15.0;  // +inf gives a pure LOS channel
  int n_taps = 8;
  double ue_speed_mps = 3.0 / 3.6;
  double carrier_hz = 60e9;
};

/// Tap delays plus complex tap gains sampled every `stride` samples and
/// linearly interpolated in between.
struct ChannelRealization {
  std::vector<int> delays;     // samples, ascending, unique
  std::vector<double> powers;  // mean power per tap, sums to 1
  std::size_t n_samples = 0;
  std::size_t stride = 1;
  std::vector<CVec> gains;     // gains[tap][k] at sample k * stride
  std::vector<std::string> warnings;

  std::size_t n_taps() const { return delays.size(); }
  cplx gain(std::size_t tap, std::size_t n) const;
  /// RMS delay spread of the mean power-delay profile.
  double rms_delay_spread_s(double fs_hz) const;
};

double max_doppler(double speed_mps, double carrier_hz);

ChannelRealization build_tdl(const ChannelConfig& cfg, double fs_hz, std::size_t n_samples,
                             std::uint64_t seed);

/// Time-invariant channel with the given taps.
ChannelRealization static_channel(std::vector<int> delays, CVec gains, std::size_t n_samples);
inline ChannelRealization identity_channel(std::size_t n_samples) {
  return static_channel({0}, {cplx(1.0, 0.0)}, n_samples);
}

/// Time-varying FIR: y[n] = sum_i g_i(n) x[n - d_i], zero history before n = 0.
CVec propagate(std::span<const cplx> samples, const ChannelRealization& ch);

/// Channel frequency response on the allocation subcarriers using the tap gains at `at_sample`.
CVec frequency_response(const ChannelRealization& ch, std::size_t at_sample, const SubcarrierMap& map);

/// Adds circular complex Gaussian noise of variance signal_power_ref / 10^(snr_db/10).
CVec awgn(std::span<const cplx> samples, double snr_db, double signal_power_ref, std::uint64_t seed);
void add_awgn(std::span<cplx> samples, double snr_db, double signal_power_ref, std::uint64_t seed);

}  // namespace mmw
