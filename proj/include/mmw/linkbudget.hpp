// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmw/types.hpp"

namespace mmw {

enum class PathLossModel { umi_los, umi_nlos };

PathLossModel parse_path_loss_model(const std::string& name);
std::string to_string(PathLossModel m);

struct TxChain {
  int n_elements = 1;
  double pa_sat_dbm = 15.4;
  double backoff_db = 0.0;
  double element_gain_dbi = 5.0;
};

struct RxChain {
  int n_elements = 1;
  double element_gain_dbi = 5.0;
  double nf0_db = 7.0;
  double nf_slope_db_per_ghz = 0.0;
};

struct LinkBudgetScenario {
  std::string name;
  double carrier_hz = 60e9;
  double bandwidth_hz = 400e6;
  TxChain tx;
  RxChain rx;
  std::optional<double> eirp_limit_dbm;
  double required_snr_db = 0.0;
  PathLossModel pathloss_model = PathLossModel::umi_los;
  double gas_atten_db_per_km = 15.0;
  double margins_db = 0.0;
};

/// Throws ConfigError on element counts < 1, negative backoff or bandwidth <= 0.
void validate(const LinkBudgetScenario& s);

/// Per-element conducted power: PA saturation minus backoff.
double element_power_dbm(const TxChain& tx);
/// EIRP before the regulatory cap: coherent combining gives 20 log10(N).
double unconstrained_eirp_dbm(const LinkBudgetScenario& s);
double eirp_dbm(const LinkBudgetScenario& s);
bool eirp_capped(const LinkBudgetScenario& s);
double rx_array_gain_db(const RxChain& rx);
double noise_floor_dbm(const LinkBudgetScenario& s);

/// UMi street canyon, BS height 10 m, UE height 1.5 m. Distances below 1 m
/// are clamped to 1 m and reported through `warnings` when given.
double path_loss_db(PathLossModel model, double distance_m, double carrier_hz,
                    std::vector<std::string>* warnings = nullptr);
/// LOS breakpoint distance d'_BP in metres.
double umi_breakpoint_m(double carrier_hz);

/// Receive SNR minus the required SNR at `distance_m`.
double link_margin_db(const LinkBudgetScenario& s, double distance_m);

/// Largest distance (metres, 0.1 m resolution) at which the link closes.
/// Throws RuntimeError naming the deficit if it fails at 1 m.
double max_link_distance(const LinkBudgetScenario& s);

/// Scenario-file row: one budget with its labels.
struct LinkCase {
  std::string scenario;
  std::string direction;  // "UL" or "DL"
  std::string waveform;   // "ofdm" or "dfts"
  LinkBudgetScenario budget;
};

struct LinkResult {
  LinkCase link;
  double distance_m = 0.0;
  std::string limiting_factor;  // "pa" or "eirp_limit"
};

/// Expands a scenario file into UL/DL x waveform budgets. Required SNRs come
/// from the file or from the required-SNR table it names.
std::vector<LinkCase> parse_link_scenarios(const std::string& json_text,
                                           const std::filesystem::path& base_dir);
std::vector<LinkCase> load_link_scenarios(const std::filesystem::path& path);

std::vector<LinkResult> evaluate_links(const std::vector<LinkCase>& cases);

}  // namespace mmw
