// SPDX-License-Identifier: Apache-2.0
#include "mmw/receiver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "mmw/fft.hpp"

namespace mmw {

std::unique_ptr<Codec> make_codec(const std::string& name) {
  if (name == "none" || name == "uncoded") return std::make_unique<UncodedCodec>();
  throw ConfigError("unknown codec '" + name + "' (supported: none)");
}

CVec estimate_channel_ls(const ResourceGrid& rx, int dmrs_symbol, std::span<const cplx> known_dmrs,
                         int smoothing_window) {
  const int m = rx.n_subcarriers();
  if (dmrs_symbol < 0 || dmrs_symbol >= rx.n_symbols())
    throw ConfigError("DMRS symbol index outside the slot");
  if (static_cast<int>(known_dmrs.size()) != m)
    throw ConfigError("DMRS length must equal the allocation width");
  if (smoothing_window < 1) throw ConfigError("smoothing window must be >= 1");

  auto y = rx.symbol(dmrs_symbol);
  CVec raw(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const cplx x = known_dmrs[static_cast<std::size_t>(k)];
    if (x == cplx{}) throw ConfigError("DMRS has a zero cell at subcarrier " + std::to_string(k));
    raw[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(k)] / x;
  }
  if (smoothing_window == 1) return raw;

  // Centred window, truncated at the allocation edges.
  const int half = smoothing_window / 2;
  CVec prefix(raw.size() + 1);
  for (std::size_t k = 0; k < raw.size(); ++k) prefix[k + 1] = prefix[k] + raw[k];
  CVec out(raw.size());
  for (int k = 0; k < m; ++k) {
    const int lo = std::max(0, k - half);
    const int hi = std::min(m - 1, k - half + smoothing_window - 1);
    out[static_cast<std::size_t>(k)] =
        (prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)]) /
        static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace {

void equalize_cell(cplx y, cplx h, double nv, cplx& x, cplx& g) {
  const double p = std::norm(h);
  const double den = p + nv;
  if (den <= 0.0) {
    x = {};
    g = {};
    return;
  }
  x = std::conj(h) * y / den;
  g = p / den;
}

}  // namespace

EqualizedSlot equalize_mmse(const ResourceGrid& rx, const ResourceGrid& h, double noise_var) {
  if (h.n_subcarriers() != rx.n_subcarriers() || h.n_symbols() != rx.n_symbols())
    throw ConfigError("channel grid shape does not match the received grid");
  if (!(noise_var >= 0.0)) throw ConfigError("noise variance must be >= 0");
  EqualizedSlot eq{ResourceGrid(rx.n_subcarriers(), rx.n_symbols()),
                   ResourceGrid(rx.n_subcarriers(), rx.n_symbols()),
                   std::vector<double>(static_cast<std::size_t>(rx.n_symbols()), noise_var)};
  for (std::size_t i = 0; i < rx.cells().size(); ++i)
    equalize_cell(rx.cells()[i], h.cells()[i], noise_var, eq.grid.cells()[i], eq.gain.cells()[i]);
  return eq;
}

EqualizedSlot equalize_mmse(const ResourceGrid& rx, std::span<const cplx> h, double noise_var) {
  if (static_cast<int>(h.size()) != rx.n_subcarriers())
    throw ConfigError("channel vector length does not match the allocation width");
  ResourceGrid hg(rx.n_subcarriers(), rx.n_symbols());
  for (int l = 0; l < rx.n_symbols(); ++l) std::copy(h.begin(), h.end(), hg.symbol(l).begin());
  return equalize_mmse(rx, hg, noise_var);
}

void remove_bias_per_cell(EqualizedSlot& eq) {
  for (std::size_t i = 0; i < eq.grid.cells().size(); ++i) {
    cplx& g = eq.gain.cells()[i];
    if (g != cplx{}) eq.grid.cells()[i] /= g;
    g = 1.0;
  }
}

void remove_bias_per_symbol(EqualizedSlot& eq, int symbol) {
  auto g = eq.gain.symbol(symbol);
  const double mean = std::accumulate(g.begin(), g.end(), cplx{}).real() / static_cast<double>(g.size());
  if (mean <= 0.0) return;
  for (auto& x : eq.grid.symbol(symbol)) x /= mean;
  for (auto& v : g) v /= mean;
}

void derotate(std::span<cplx> v, cplx rotation) {
  const double a = std::abs(rotation);
  if (a == 0.0) return;
  const cplx c = std::conj(rotation) / a;
  for (auto& x : v) x *= c;
}

namespace {

double unwrap_towards(double value, double reference) {
  return value - 2.0 * kPi * std::round((value - reference) / (2.0 * kPi));
}

}  // namespace

CVec estimate_cpe(const EqualizedSlot& eq, const PtrsPattern& pat) {
  if (pat.domain != PtrsDomain::frequency) throw ConfigError("CPE estimation needs a frequency-domain PTRS");
  if (pat.symbols.empty()) throw ConfigError("PTRS pattern carries no symbols");
  std::vector<int> sym;
  std::vector<double> ang;
  for (const auto& s : pat.symbols) {
    auto y = eq.grid.symbol(s.symbol);
    cplx acc{};
    for (std::size_t i = 0; i < s.indices.size(); ++i)
      acc += y[static_cast<std::size_t>(s.indices[i])] * std::conj(s.pilots[i]);
    double a = std::arg(acc);
    if (!ang.empty()) a = unwrap_towards(a, ang.back());
    sym.push_back(s.symbol);
    ang.push_back(a);
  }
  CVec out(static_cast<std::size_t>(eq.grid.n_symbols()));
  for (int l = 0; l < eq.grid.n_symbols(); ++l) {
    double a;
    if (l <= sym.front()) {
      a = ang.front();
    } else if (l >= sym.back()) {
      a = ang.back();
    } else {
      const auto it = std::upper_bound(sym.begin(), sym.end(), l);
      const std::size_t hi = static_cast<std::size_t>(it - sym.begin());
      const std::size_t lo = hi - 1;
      const double t = static_cast<double>(l - sym[lo]) / static_cast<double>(sym[hi] - sym[lo]);
      a = ang[lo] + t * (ang[hi] - ang[lo]);
    }
    out[static_cast<std::size_t>(l)] = std::polar(1.0, a);
  }
  return out;
}

IciEstimate estimate_ici_ls(std::span<const cplx> eq_symbol, const PtrsSymbol& ptrs,
                            const SubcarrierMap& map, int order) {
  if (order < 0) throw ConfigError("ICI order must be >= 0");
  if (static_cast<int>(eq_symbol.size()) != map.width())
    throw ConfigError("equalized symbol length does not match the allocation width");

  // Known transmit values by signed offset; DC is a known zero.
  std::unordered_map<int, cplx> known;
  known.reserve(ptrs.indices.size() + 1);
  std::unordered_map<int, int> alloc_of;
  for (std::size_t i = 0; i < ptrs.indices.size(); ++i) {
    const int off = map.offset(ptrs.indices[i]);
    known[off] = ptrs.pilots[i];
    alloc_of[off] = ptrs.indices[i];
  }
  known[0] = cplx{};

  const int n_taps = 2 * order + 1;
  std::vector<int> rows;
  for (const auto& [off, idx] : alloc_of) {
    (void)idx;
    bool ok = true;
    for (int i = -order; i <= order && ok; ++i) ok = known.count(off - i) != 0;
    if (ok) rows.push_back(off);
  }
  std::sort(rows.begin(), rows.end());
  if (static_cast<int>(rows.size()) < n_taps)
    throw RankDeficientError("ICI estimator has " + std::to_string(rows.size()) + " usable rows for " +
                                 std::to_string(n_taps) + " taps",
                             std::numeric_limits<double>::infinity());

  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), n_taps);
  Eigen::VectorXcd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int m = rows[r];
    for (int i = -order; i <= order; ++i) a(static_cast<Eigen::Index>(r), i + order) = known.at(m - i);
    y(static_cast<Eigen::Index>(r)) = eq_symbol[static_cast<std::size_t>(alloc_of.at(m))];
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e10))
    throw RankDeficientError("ICI estimator matrix is rank deficient (condition number " +
                                 std::to_string(cond) + ")",
                             cond);
  const Eigen::VectorXcd j = svd.solve(y);

  IciEstimate est;
  est.order = order;
  est.condition = cond;
  est.taps.assign(j.data(), j.data() + j.size());
  return est;
}

CVec compensate_ici(std::span<const cplx> eq_symbol, const IciEstimate& est, const SubcarrierMap& map) {
  const int n = map.fft_size();
  if (2 * est.order + 1 > n) throw ConfigError("ICI order too large for the FFT size");
  CVec bins(static_cast<std::size_t>(n));
  map.scatter(eq_symbol, bins);
  CVec time = dsp::ifft(bins);

  CVec jb(static_cast<std::size_t>(n));
  for (int i = -est.order; i <= est.order; ++i) jb[static_cast<std::size_t>((i + n) % n)] = est.tap(i);
  const CVec w = dsp::ifft(jb);  // w[n] = sum_i J_i exp(j 2 pi i n / N)
  for (int k = 0; k < n; ++k) {
    const cplx wk = w[static_cast<std::size_t>(k)];
    if (wk != cplx{}) time[static_cast<std::size_t>(k)] *= std::conj(wk) / std::abs(wk);
  }

  const CVec back = dsp::fft(time);
  CVec out(eq_symbol.size());
  map.gather(back, out);
  for (auto& x : out) x /= static_cast<double>(n);
  return out;
}

PnTrack dfts_pn_track(std::span<const cplx> time_block, const PtrsPattern& pat, const PtrsSymbol& sym) {
  if (pat.domain != PtrsDomain::pre_dft) throw ConfigError("DFT-s tracking needs a pre-DFT PTRS");
  if (static_cast<int>(time_block.size()) != pat.alloc_width)
    throw ConfigError("time block length does not match the allocation width");
  const auto spg = static_cast<std::size_t>(pat.samples_per_group);
  const std::size_t groups = sym.indices.size() / spg;

  PnTrack t;
  t.centers = group_centers(pat, sym);
  cplx total{};
  for (std::size_t g = 0; g < groups; ++g) {
    cplx acc{};
    for (std::size_t s = 0; s < spg; ++s) {
      const std::size_t i = g * spg + s;
      acc += time_block[static_cast<std::size_t>(sym.indices[i])] * std::conj(sym.pilots[i]);
    }
    total += acc;
    double a = std::arg(acc);
    if (!t.group_phase.empty()) a = unwrap_towards(a, t.group_phase.back());
    t.group_phase.push_back(a);
  }
  t.cpe = std::abs(total) > 0.0 ? total / std::abs(total) : cplx{1.0, 0.0};

  t.phase_rad.resize(time_block.size());
  const auto& c = t.centers;
  const auto& p = t.group_phase;
  std::size_t seg = 0;
  for (std::size_t n = 0; n < time_block.size(); ++n) {
    const double x = static_cast<double>(n);
    if (x <= c.front()) {
      t.phase_rad[n] = p.front();
    } else if (x >= c.back()) {
      t.phase_rad[n] = p.back();
    } else {
      while (x > c[seg + 1]) ++seg;
      const double u = (x - c[seg]) / (c[seg + 1] - c[seg]);
      t.phase_rad[n] = p[seg] + u * (p[seg + 1] - p[seg]);
    }
  }
  return t;
}

ErrorCount detect_and_count(std::span<const cplx> eq_data, std::span<const std::uint8_t> tx_bits,
                            Modulation m, const Codec& codec, double noise_var,
                            std::span<const std::uint8_t> tx_info_bits) {
  const std::size_t q = static_cast<std::size_t>(bits_per_symbol(m));
  if (tx_bits.size() != eq_data.size() * q)
    throw ConfigError("transmitted bit count does not match the symbol count");
  ErrorCount c;
  c.bits = tx_bits.size();
  c.symbols = eq_data.size();

  const bool want_llr = !codec.hard_decision();
  const Demapped d = qam_demap(eq_data, m, want_llr ? std::optional<double>(std::max(noise_var, 1e-12))
                                                    : std::nullopt);
  for (std::size_t s = 0; s < eq_data.size(); ++s) {
    bool sym_err = false;
    for (std::size_t b = 0; b < q; ++b) {
      if (d.bits[s * q + b] != tx_bits[s * q + b]) {
        ++c.bit_errors;
        sym_err = true;
      }
    }
    if (sym_err) ++c.symbol_errors;
  }

  if (codec.hard_decision()) {
    c.block_error = c.bit_errors > 0;
  } else {
    const Bits info = codec.decode(d.llrs, tx_info_bits.size());
    c.block_error = !std::equal(info.begin(), info.end(), tx_info_bits.begin());
  }
  return c;
}

ErrorCount detect_and_count(std::span<const cplx> eq_data, std::span<const std::uint8_t> tx_bits,
                            Modulation m) {
  const UncodedCodec codec;
  return detect_and_count(eq_data, tx_bits, m, codec, 1.0, tx_bits);
}

}  // namespace mmw
