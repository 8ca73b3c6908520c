// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmw/config.hpp"
#include "mmw/csv.hpp"
#include "mmw/linkbudget.hpp"
#include "mmw/receiver.hpp"

namespace mmw {

/// Stateless 64-bit mix used for every derived seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream);

struct ErrorTally {
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t symbols = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t blocks = 0;
  std::uint64_t block_errors = 0;
  double evm_error = 0.0;      // sum |x_hat - x|^2
  double evm_reference = 0.0;  // sum |x|^2

  void add(const ErrorTally& o);
  double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
  double ser() const {
    return symbols ? static_cast<double>(symbol_errors) / static_cast<double>(symbols) : 0.0;
  }
  double bler() const {
    return blocks ? static_cast<double>(block_errors) / static_cast<double>(blocks) : 0.0;
  }
  double evm_rms() const { return evm_reference > 0.0 ? std::sqrt(evm_error / evm_reference) : 0.0; }
  double metric(Metric m) const { return m == Metric::bler ? bler() : ser(); }
};

/// One slot. `alternate` is set only for genie-best DFT-s-OFDM tracking,
/// where `primary` is the interpolating estimator and `alternate` the CPE one.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  ErrorTally primary;
  std::optional<ErrorTally> alternate;
};

/// Immutable per-config state (patterns, PN shaping, reference sequences).
/// run() is const and safe to call from several threads.
class SlotSimulator {
 public:
  explicit SlotSimulator(const SimConfig& cfg);
  ~SlotSimulator();
  SlotSimulator(const SlotSimulator&) = delete;
  SlotSimulator& operator=(const SlotSimulator&) = delete;

  TrialRecord run(std::uint64_t trial_index, double snr_db) const;
  const SimConfig& config() const;
  const NumerologyDerived& numerology() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

TrialRecord run_slot_trial(const SimConfig& cfg, std::uint64_t trial_index, double snr_db);

/// Runs f(i) for i in [0, n) on `workers` threads. f must be thread safe.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f);

struct SweepRow {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  ErrorTally tally;        // the reported estimator's tally
  std::string estimator;   // compensation that produced `tally`
};

struct SweepResult {
  SimConfig config;
  std::string fingerprint;
  std::vector<SweepRow> rows;
};

/// Per SNR point, trials run in index order until the stop rule fires.
SweepResult run_sweep(const SimConfig& cfg);
/// Fixed trial count per point, no early stop.
SweepRow run_point(const SlotSimulator& sim, double snr_db, std::uint64_t trials, Metric metric);

struct RequiredSnrResult {
  std::optional<double> snr_db;  // empty when unreachable
  double floor_estimate = 0.0;   // metric at the highest SNR
  double floor_sigma = 0.0;
  int evaluations = 0;
};

/// Bisection on the config's SNR range with stop.max_trials trials per point.
RequiredSnrResult required_snr(const SimConfig& cfg, const RequiredSnrSettings& settings);

/// PAPR of independent oversampled data symbols (no PTRS), one value per symbol.
std::vector<double> papr_samples(const SimConfig& cfg, const PaprSettings& settings);

/// Sweep CSV: comment lines (fingerprint, labels) then
/// case,snr_db,trials,bits,bit_errors,symbols,symbol_errors,blocks,block_errors,ber,ser,bler,evm_rms,estimator
CsvTable sweep_table(const std::vector<SweepResult>& results);
std::vector<SweepResult> parse_sweep_table(const CsvTable& table);

CsvTable required_snr_table(const std::vector<std::pair<SimConfig, RequiredSnrResult>>& results,
                            const RequiredSnrSettings& settings);

CsvTable papr_table(const std::vector<std::pair<SimConfig, std::vector<double>>>& results,
                    const PaprSettings& settings);

CsvTable link_table(const std::vector<LinkResult>& results);

}  // namespace mmw
