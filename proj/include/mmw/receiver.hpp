// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "mmw/codec.hpp"
#include "mmw/ptrs.hpp"
#include "mmw/types.hpp"
#include "mmw/waveform.hpp"

namespace mmw {

/// LS estimate Y/X on the DMRS symbol, smoothed with a centred moving average
/// of `smoothing_window` subcarriers (1 disables smoothing). The DMRS must
/// occupy every allocated subcarrier.
CVec estimate_channel_ls(const ResourceGrid& rx, int dmrs_symbol, std::span<const cplx> known_dmrs,
                         int smoothing_window = 7);

struct EqualizedSlot {
  ResourceGrid grid;             // MMSE output H* Y / (|H|^2 + N0)
  ResourceGrid gain;             // |H|^2 / (|H|^2 + N0): the MMSE bias per cell
  std::vector<double> noise_var;  // post-equalization noise variance per symbol
};

/// Per-cell one-tap MMSE with a per-cell channel grid.
EqualizedSlot equalize_mmse(const ResourceGrid& rx, const ResourceGrid& h, double noise_var);
/// Per-cell one-tap MMSE with a channel held constant over the slot.
EqualizedSlot equalize_mmse(const ResourceGrid& rx, std::span<const cplx> h, double noise_var);

/// Divides every cell by its MMSE bias (equivalent to zero forcing per cell).
void remove_bias_per_cell(EqualizedSlot& eq);
/// Divides one symbol by its mean MMSE bias (unbiased MMSE for DFT-s-OFDM).
void remove_bias_per_symbol(EqualizedSlot& eq, int symbol);

/// Per-symbol unit-modulus CPE estimate for every slot symbol. Symbols
/// without PTRS get angles interpolated between neighbouring PTRS symbols
/// and held constant outside them.
CVec estimate_cpe(const EqualizedSlot& eq, const PtrsPattern& pat);

void derotate(std::span<cplx> v, cplx rotation);

/// PN spectral taps J_{-K..K}; taps[K] is the CPE term.
struct IciEstimate {
  CVec taps;
  int order = 0;
  double condition = 1.0;

  cplx tap(int i) const { return taps[static_cast<std::size_t>(i + order)]; }
  cplx cpe() const { return tap(0); }
};

class RankDeficientError : public RuntimeError {
 public:
  RankDeficientError(const std::string& what, double condition)
      : RuntimeError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// LS fit of Y_m = sum_{i=-K..K} J_i X_{m-i} over block rows whose whole
/// window lies on known bins (pilots or the empty DC bin). Works in FFT-bin
/// coordinates so the DC gap is handled exactly.
IciEstimate estimate_ici_ls(std::span<const cplx> eq_symbol, const PtrsSymbol& ptrs,
                            const SubcarrierMap& map, int order);

/// Phase-only ICI correction: multiplies the symbol's time samples by
/// exp(-j arg w[n]) with w the inverse DFT of the zero-padded taps.
CVec compensate_ici(std::span<const cplx> eq_symbol, const IciEstimate& est, const SubcarrierMap& map);

struct PnTrack {
  std::vector<double> phase_rad;    // one per pre-DFT sample
  cplx cpe{1.0, 0.0};               // block-mean rotation over all PTRS samples
  std::vector<double> centers;      // group centres
  std::vector<double> group_phase;  // unwrapped group rotations
};

/// Group-mean rotations at the group centres, linearly interpolated in
/// between and held constant outside the first and last centre.
PnTrack dfts_pn_track(std::span<const cplx> time_block, const PtrsPattern& pat, const PtrsSymbol& sym);

struct ErrorCount {
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t symbols = 0;
  std::uint64_t symbol_errors = 0;
  bool block_error = false;
};

/// Hard decisions and raw error counts against the transmitted channel bits.
/// The block error flag is taken after `codec` decoding of the whole block.
ErrorCount detect_and_count(std::span<const cplx> eq_data, std::span<const std::uint8_t> tx_bits,
                            Modulation m, const Codec& codec, double noise_var,
                            std::span<const std::uint8_t> tx_info_bits);
/// Uncoded convenience overload.
ErrorCount detect_and_count(std::span<const cplx> eq_data, std::span<const std::uint8_t> tx_bits,
                            Modulation m);

}  // namespace mmw
