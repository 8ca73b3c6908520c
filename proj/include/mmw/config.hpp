// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmw/channel.hpp"
#include "mmw/numerology.hpp"
#include "mmw/phase_noise.hpp"
#include "mmw/ptrs.hpp"
#include "mmw/waveform.hpp"

namespace mmw {

enum class Waveform { ofdm, dfts };
enum class ChannelType { awgn, tdl };
enum class ChannelEstimation { genie, ls };
/// `automatic` picks none without PTRS, cpe for distributed, ici for block
/// and genie_best for pre-DFT groups.
enum class PnCompensation { automatic, none, cpe, interp, ici, genie_best };
enum class Metric { bler, ser };

Waveform parse_waveform(const std::string& s);
std::string to_string(Waveform w);
PnCompensation parse_pn_compensation(const std::string& s);
std::string to_string(PnCompensation p);
Metric parse_metric(const std::string& s);
std::string to_string(Metric m);

struct PhaseNoiseSetup {
  bool enabled = false;
  double carrier_hz = 60e9;
  PhaseNoiseModel tx;  // models at their own reference carrier
  PhaseNoiseModel rx;
};

struct ReceiverOptions {
  ChannelEstimation channel_estimation = ChannelEstimation::genie;
  int smoothing_window = 7;
  PnCompensation pn_compensation = PnCompensation::automatic;
  int ici_order = 4;
  std::string codec = "none";
};

struct StopRule {
  int min_block_errors = 100;
  int max_trials = 100;
};

struct SimConfig {
  std::string label;
  Waveform waveform = Waveform::ofdm;
  NumerologyConfig numerology{3, 4096, 180, 14};
  Modulation modulation = Modulation::qpsk;
  std::optional<PtrsConfig> ptrs;
  PhaseNoiseSetup pn;
  ChannelType channel_type = ChannelType::awgn;
  ChannelConfig channel;
  ReceiverOptions rx;
  std::vector<double> snr_db{0.0};
  StopRule stop;
  std::uint64_t base_seed = 1;
  int workers = 1;  // never affects results
};

/// Throws ConfigError for any inconsistent combination.
void validate(const SimConfig& cfg);

/// PN compensation after resolving `automatic`.
PnCompensation resolved_pn_compensation(const SimConfig& cfg);

/// Canonical JSON of everything that affects results (workers excluded).
std::string canonical_json(const SimConfig& cfg);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string fingerprint(const SimConfig& cfg);
std::string fnv1a_hex(const std::string& text);

/// Parses one case. PN model files are resolved against `base_dir`.
SimConfig parse_sim_config(const std::string& json_text, const std::filesystem::path& base_dir);

struct RequiredSnrSettings {
  Metric metric = Metric::bler;
  double target = 0.1;
  double resolution_db = 0.25;
};

struct PaprSettings {
  int symbols = 100000;
  int oversample = 4;
  std::vector<double> thresholds_db;
};

/// A config file: shared settings plus an optional "cases" array of
/// overrides, each expanded into its own SimConfig.
struct SimFile {
  std::vector<SimConfig> cases;
  RequiredSnrSettings reqsnr;
  PaprSettings papr;
};

SimFile parse_sim_file(const std::string& json_text, const std::filesystem::path& base_dir);
SimFile load_sim_file(const std::filesystem::path& path);

}  // namespace mmw
