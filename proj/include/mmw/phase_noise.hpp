// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mmw/types.hpp"

namespace mmw {

struct PoleZero {
  double freq_hz = 0.0;
  double exponent = 0.0;
};

/// S(f) = 10^(psd0/10) * prod(1 + (f/fz)^az) / prod(1 + (f/fp)^ap)
struct PsdComponent {
  std::string label;
  double psd0_dbc_hz = 0.0;
  std::vector<PoleZero> zeros;
  std::vector<PoleZero> poles;
};

/// Oscillator phase-noise mask as a sum of pole/zero components, specified at
/// a reference carrier frequency.
struct PhaseNoiseModel {
  std::string name;
  double ref_carrier_hz = 0.0;
  std::vector<PsdComponent> components;
};

/// Throws ConfigError if any pole/zero frequency is non-positive or the carrier is.
void validate(const PhaseNoiseModel& model);

/// Linear single-sideband PSD in 1/Hz.
double psd_linear(const PhaseNoiseModel& model, double f_offset_hz);
double psd_dbc_hz(const PhaseNoiseModel& model, double f_offset_hz);

/// Shifts every component by 20*log10(new/ref) dB and records the new carrier.
PhaseNoiseModel scale_to_carrier(PhaseNoiseModel model, double new_carrier_hz);

/// Highest pole or zero frequency in the model (0 for flat models).
double highest_corner_hz(const PhaseNoiseModel& model);

struct PhaseTrajectory {
  std::vector<double> phase_rad;
  double fs_hz = 0.0;
  std::vector<std::string> warnings;
};

/// Frequency-domain phase-noise synthesis for a fixed (model, n, fs). The
/// per-bin shaping is computed once; generate() is const and thread safe.
class PhaseNoiseSynthesizer {
 public:
  PhaseNoiseSynthesizer(const PhaseNoiseModel& model, std::size_t n, double fs_hz);

  PhaseTrajectory generate(std::uint64_t seed) const;

  std::size_t size() const { return n_; }
  double fs_hz() const { return fs_hz_; }

 private:
  std::size_t n_;
  double fs_hz_;
  std::vector<double> bin_std_;  // bins 0..n/2
  std::vector<std::string> warnings_;
};

/// n must be a power of two >= 2^14.
PhaseTrajectory generate(const PhaseNoiseModel& model, std::size_t n, double fs_hz,
                         std::uint64_t seed);

/// out[n] = samples[n] * exp(j * phase[n]).
CVec apply(std::span<const cplx> samples, const PhaseTrajectory& traj);
void apply_in_place(std::span<cplx> samples, std::span<const double> phase_rad);

PhaseNoiseModel parse_phase_noise_model(const std::string& json_text);
PhaseNoiseModel load_phase_noise_model(const std::filesystem::path& path);
std::string to_json(const PhaseNoiseModel& model);

/// Built-in oscillator models ("bs_gaas", "ue_cmos"), identical to data/pn/*.json.
PhaseNoiseModel builtin_phase_noise_model(const std::string& name);

}  // namespace mmw
