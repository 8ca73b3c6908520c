// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mmw/numerology.hpp"
#include "mmw/types.hpp"

namespace mmw {

enum class Modulation { qpsk = 2, qam16 = 4, qam64 = 6, qam256 = 8 };

inline int bits_per_symbol(Modulation m) { return static_cast<int>(m); }
Modulation parse_modulation(std::string_view name);
std::string to_string(Modulation m);

/// Gray-mapped square QAM with unit average energy. Bit order follows NR:
/// even-indexed bits select the in-phase level, odd-indexed bits the quadrature level.
CVec qam_map(std::span<const std::uint8_t> bits, Modulation m);

/// Minimum-distance hard decisions.
Bits qam_demap_hard(std::span<const cplx> symbols, Modulation m);

struct Demapped {
  Bits bits;
  std::vector<double> llrs;  // max-log, positive favours bit 0; empty unless requested
};

/// Hard decisions plus optional max-log LLRs when noise_var is given.
Demapped qam_demap(std::span<const cplx> symbols, Modulation m, std::optional<double> noise_var);

/// Constellation points in bit-label order (index = bits packed MSB first).
CVec constellation(Modulation m);

/// Maps logical allocation indices 0..width-1 onto FFT bins. The allocation is
/// split symmetrically around DC, which stays unused.
class SubcarrierMap {
 public:
  SubcarrierMap(int width, int fft_size);

  int width() const { return width_; }
  int fft_size() const { return fft_size_; }
  /// Signed subcarrier offset from DC (never 0).
  int offset(int j) const { return j < half_ ? j - half_ : j - half_ + 1; }
  /// Bin index in [0, fft_size).
  int bin(int j) const { return (offset(j) + fft_size_) % fft_size_; }
  /// Logical index of the first subcarrier relative to DC.
  int first_offset() const { return -half_; }

  void scatter(std::span<const cplx> alloc, std::span<cplx> bins) const;
  void gather(std::span<const cplx> bins, std::span<cplx> alloc) const;

 private:
  int width_;
  int fft_size_;
  int half_;
};

/// Complex symbols on a (subcarrier x symbol) lattice for one slot. Cells of
/// one symbol are contiguous.
class ResourceGrid {
 public:
  ResourceGrid() = default;
  ResourceGrid(int n_subcarriers, int n_symbols)
      : n_sc_(n_subcarriers), n_sym_(n_symbols),
        cells_(static_cast<std::size_t>(n_subcarriers) * n_symbols) {}

  int n_subcarriers() const { return n_sc_; }
  int n_symbols() const { return n_sym_; }

  cplx& at(int sc, int sym) { return cells_[index(sc, sym)]; }
  const cplx& at(int sc, int sym) const { return cells_[index(sc, sym)]; }

  std::span<cplx> symbol(int l) {
    return {cells_.data() + static_cast<std::size_t>(l) * n_sc_, static_cast<std::size_t>(n_sc_)};
  }
  std::span<const cplx> symbol(int l) const {
    return {cells_.data() + static_cast<std::size_t>(l) * n_sc_, static_cast<std::size_t>(n_sc_)};
  }

  const CVec& cells() const { return cells_; }
  CVec& cells() { return cells_; }

 private:
  std::size_t index(int sc, int sym) const {
    return static_cast<std::size_t>(sym) * n_sc_ + static_cast<std::size_t>(sc);
  }
  int n_sc_ = 0;
  int n_sym_ = 0;
  CVec cells_;
};

/// Time-domain scaling. `unitary` uses a 1/sqrt(N) IDFT; `unit_power` additionally
/// scales by sqrt(N / width) so a fully loaded unit-energy allocation has unit
/// mean sample power.
enum class OfdmScaling { unitary, unit_power };

/// Useful part of one OFDM symbol (no CP) at `oversample` times the nominal rate.
CVec ofdm_symbol(std::span<const cplx> alloc, int fft_size, int oversample = 1,
                 OfdmScaling scaling = OfdmScaling::unit_power);
/// Inverse of ofdm_symbol for oversample = 1.
CVec ofdm_symbol_demod(std::span<const cplx> useful, int width,
                       OfdmScaling scaling = OfdmScaling::unit_power);

CVec ofdm_modulate(const ResourceGrid& grid, const NumerologyDerived& num,
                   OfdmScaling scaling = OfdmScaling::unit_power);
ResourceGrid ofdm_demodulate(std::span<const cplx> samples, const NumerologyDerived& num,
                             OfdmScaling scaling = OfdmScaling::unit_power);

/// Unitary m_sc-point DFT applied blockwise (DFT-s-OFDM transform precoding).
CVec transform_precode(std::span<const cplx> data, int m_sc);
/// Unitary m_sc-point IDFT applied blockwise.
CVec transform_deprecode(std::span<const cplx> data, int m_sc);

struct CcdfPoint {
  double threshold_db;
  double ccdf;
};

/// PAPR in dB of each consecutive `period`-sample block.
std::vector<double> papr_per_period(std::span<const cplx> samples, std::size_t period);
/// Fraction of blocks whose PAPR exceeds each threshold.
std::vector<CcdfPoint> papr_ccdf(std::span<const cplx> samples, std::size_t period,
                                 std::span<const double> thresholds_db);
std::vector<CcdfPoint> ccdf_from_papr(std::span<const double> papr_db,
                                      std::span<const double> thresholds_db);
/// Threshold at which the empirical CCDF first drops to `level` or below.
double ccdf_crossing_db(std::span<const double> papr_db, double level);

}  // namespace mmw
