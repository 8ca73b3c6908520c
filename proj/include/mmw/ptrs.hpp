// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <variant>

#include "mmw/types.hpp"

namespace mmw {

/// Rel-15 OFDM PTRS: one subcarrier in every 2nd or 4th PRB, on every L-th data symbol.
struct OfdmDistributed {
  int every_nth_prb = 2;
  int time_density = 1;
};

/// Contiguous block of PTRS subcarriers at the allocation centre, every symbol.
struct OfdmBlock {
  int block_prbs = 4;
};

/// Rel-15 DFT-s-OFDM pre-DFT group PTRS.
struct DftsGroups {
  int n_groups = 8;
  int samples_per_group = 4;
};

/// Enhanced DFT-s-OFDM configuration with 12 groups of 4 samples.
struct DftsEnhanced {
  static constexpr int n_groups = 12;
  static constexpr int samples_per_group = 4;
};

using PtrsConfig = std::variant<OfdmDistributed, OfdmBlock, DftsGroups, DftsEnhanced>;

enum class PtrsDomain { frequency, pre_dft };

struct PtrsSymbol {
  int symbol = 0;            // slot symbol index
  std::vector<int> indices;  // ascending; subcarrier or pre-DFT sample indices
  CVec pilots;               // unit-energy QPSK, one per index
};

struct PtrsPattern {
  PtrsDomain domain = PtrsDomain::frequency;
  int alloc_width = 0;
  int n_groups = 0;           // pre-DFT patterns only
  int samples_per_group = 0;  // pre-DFT patterns only
  std::vector<PtrsSymbol> symbols;

  /// Entry for a slot symbol, or nullptr if it carries no PTRS.
  const PtrsSymbol* find(int symbol) const;
  std::size_t resource_count() const;
};

std::string ptrs_name(const PtrsConfig& cfg);
PtrsDomain ptrs_domain(const PtrsConfig& cfg);

/// Throws ConfigError if the configuration is outside its supported set or does
/// not fit in an allocation of `alloc` subcarriers.
void validate(const PtrsConfig& cfg, int alloc);

/// `data_symbols` lists the slot symbol indices available for PTRS, ascending.
PtrsPattern build_pattern(const PtrsConfig& cfg, int alloc, std::span<const int> data_symbols,
                          std::uint64_t seed);

/// PTRS resources divided by all data-region resources.
double overhead(const PtrsConfig& cfg, int alloc, int n_data_symbols);

/// Fractional centre positions of the groups in a pre-DFT pattern symbol.
std::vector<double> group_centers(const PtrsPattern& pattern, const PtrsSymbol& sym);

}  // namespace mmw
