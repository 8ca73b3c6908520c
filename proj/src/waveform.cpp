// SPDX-License-Identifier: Apache-2.0
#include "mmw/waveform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mmw/fft.hpp"

namespace mmw {
namespace {

// Per-dimension Gray PAM table for k bits: level for each k-bit label
// (label bit i = c_i, MSB first) and the inverse lookup by level index.
struct PamTable {
  int k = 0;
  std::vector<double> level_of_label;  // unnormalized odd integers
  std::vector<int> label_of_index;     // index 0 = most negative level
  double scale = 1.0;                  // 1 / sqrt(average symbol energy)
};

PamTable make_pam(int k) {
  PamTable t;
  t.k = k;
  const int n = 1 << k;
  t.level_of_label.resize(n);
  t.label_of_index.resize(n);
  for (int label = 0; label < n; ++label) {
    auto bit = [&](int i) { return (label >> (k - 1 - i)) & 1; };
    double v = 1.0 - 2.0 * bit(k - 1);
    for (int i = k - 2; i >= 0; --i) v = (1.0 - 2.0 * bit(i)) * (std::ldexp(1.0, k - 1 - i) - v);
    t.level_of_label[label] = v;
    const int idx = static_cast<int>(std::lround((v + (n - 1)) / 2.0));
    t.label_of_index[idx] = label;
  }
  const double energy = 2.0 * (std::pow(4.0, k) - 1.0) / 3.0;
  t.scale = 1.0 / std::sqrt(energy);
  return t;
}

const PamTable& pam_for(Modulation m) {
  static const std::array<PamTable, 4> tables{make_pam(1), make_pam(2), make_pam(3), make_pam(4)};
  return tables[static_cast<std::size_t>(bits_per_symbol(m) / 2 - 1)];
}

int nearest_index(double x, const PamTable& t) {
  const int n = 1 << t.k;
  const double u = x / t.scale;
  const long idx = std::lround((u + (n - 1)) / 2.0);
  return static_cast<int>(std::clamp<long>(idx, 0, n - 1));
}

}  // namespace

Modulation parse_modulation(std::string_view name) {
  if (name == "qpsk") return Modulation::qpsk;
  if (name == "16qam" || name == "qam16") return Modulation::qam16;
  if (name == "64qam" || name == "qam64") return Modulation::qam64;
  if (name == "256qam" || name == "qam256") return Modulation::qam256;
  throw ConfigError("unknown modulation '" + std::string(name) + "'");
}

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::qpsk: return "qpsk";
    case Modulation::qam16: return "16qam";
    case Modulation::qam64: return "64qam";
    case Modulation::qam256: return "256qam";
  }
  return "?";
}

CVec qam_map(std::span<const std::uint8_t> bits, Modulation m) {
  const int qm = bits_per_symbol(m);
  if (bits.size() % static_cast<std::size_t>(qm) != 0)
    throw ConfigError("qam_map: bit count " + std::to_string(bits.size()) +
                      " not divisible by " + std::to_string(qm));
  const PamTable& t = pam_for(m);
  const int k = qm / 2;
  CVec out(bits.size() / qm);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::uint8_t* b = bits.data() + s * qm;
    int li = 0;
    int lq = 0;
    for (int i = 0; i < k; ++i) {
      li = (li << 1) | (b[2 * i] & 1);
      lq = (lq << 1) | (b[2 * i + 1] & 1);
    }
    out[s] = cplx(t.level_of_label[li], t.level_of_label[lq]) * t.scale;
  }
  return out;
}

Bits qam_demap_hard(std::span<const cplx> symbols, Modulation m) {
  const PamTable& t = pam_for(m);
  const int k = t.k;
  Bits out(symbols.size() * 2 * k);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const int li = t.label_of_index[nearest_index(symbols[s].real(), t)];
    const int lq = t.label_of_index[nearest_index(symbols[s].imag(), t)];
    std::uint8_t* b = out.data() + s * 2 * k;
    for (int i = 0; i < k; ++i) {
      b[2 * i] = static_cast<std::uint8_t>((li >> (k - 1 - i)) & 1);
      b[2 * i + 1] = static_cast<std::uint8_t>((lq >> (k - 1 - i)) & 1);
    }
  }
  return out;
}

Demapped qam_demap(std::span<const cplx> symbols, Modulation m, std::optional<double> noise_var) {
  Demapped out;
  out.bits = qam_demap_hard(symbols, m);
  if (!noise_var) return out;
  if (!(*noise_var > 0.0)) throw ConfigError("qam_demap: noise_var must be positive for LLRs");
  const PamTable& t = pam_for(m);
  const int k = t.k;
  const int n = 1 << k;
  out.llrs.resize(out.bits.size());
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    for (int dim = 0; dim < 2; ++dim) {
      const double x = dim == 0 ? symbols[s].real() : symbols[s].imag();
      for (int i = 0; i < k; ++i) {
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = d0;
        for (int label = 0; label < n; ++label) {
          const double e = x - t.level_of_label[label] * t.scale;
          const double d = e * e;
          if ((label >> (k - 1 - i)) & 1)
            d1 = std::min(d1, d);
          else
            d0 = std::min(d0, d);
        }
        out.llrs[s * 2 * k + 2 * i + dim] = (d1 - d0) / *noise_var;
      }
    }
  }
  return out;
}

CVec constellation(Modulation m) {
  const int qm = bits_per_symbol(m);
  const int n = 1 << qm;
  Bits bits(static_cast<std::size_t>(n) * qm);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < qm; ++i) bits[static_cast<std::size_t>(v) * qm + i] = (v >> (qm - 1 - i)) & 1;
  return qam_map(bits, m);
}

SubcarrierMap::SubcarrierMap(int width, int fft_size)
    : width_(width), fft_size_(fft_size), half_(width / 2) {
  if (width < 1) throw ConfigError("SubcarrierMap: width must be positive");
  if (width + 1 > fft_size)
    throw ConfigError("SubcarrierMap: allocation of " + std::to_string(width) +
                      " subcarriers plus DC exceeds FFT size " + std::to_string(fft_size));
}

void SubcarrierMap::scatter(std::span<const cplx> alloc, std::span<cplx> bins) const {
  std::fill(bins.begin(), bins.end(), cplx{});
  for (int j = 0; j < width_; ++j) bins[bin(j)] = alloc[j];
}

void SubcarrierMap::gather(std::span<const cplx> bins, std::span<cplx> alloc) const {
  for (int j = 0; j < width_; ++j) alloc[j] = bins[bin(j)];
}

CVec ofdm_symbol(std::span<const cplx> alloc, int fft_size, int oversample, OfdmScaling scaling) {
  if (oversample < 1) throw ConfigError("ofdm_symbol: oversample must be >= 1");
  const int n = fft_size * oversample;
  const int width = static_cast<int>(alloc.size());
  const SubcarrierMap map(width, n);
  CVec bins(n);
  map.scatter(alloc, bins);
  CVec out(n);
  dsp::unitary_ifft(bins, out);
  // Oversampling keeps the nominal-rate power convention.
  double s = std::sqrt(static_cast<double>(oversample));
  if (scaling == OfdmScaling::unit_power) s *= std::sqrt(static_cast<double>(fft_size) / width);
  for (auto& x : out) x *= s;
  return out;
}

CVec ofdm_symbol_demod(std::span<const cplx> useful, int width, OfdmScaling scaling) {
  const int n = static_cast<int>(useful.size());
  const SubcarrierMap map(width, n);
  CVec bins(n);
  dsp::unitary_fft(useful, bins);
  CVec out(width);
  map.gather(bins, out);
  if (scaling == OfdmScaling::unit_power) {
    const double s = std::sqrt(static_cast<double>(width) / n);
    for (auto& x : out) x *= s;
  }
  return out;
}

CVec ofdm_modulate(const ResourceGrid& grid, const NumerologyDerived& num, OfdmScaling scaling) {
  const int n = num.cfg.fft_size;
  const int cp = num.cp_samples;
  if (grid.n_subcarriers() != num.active_subcarriers())
    throw ConfigError("ofdm_modulate: grid width " + std::to_string(grid.n_subcarriers()) +
                      " differs from allocation " + std::to_string(num.active_subcarriers()));
  if (grid.n_subcarriers() + 1 > n)
    throw ConfigError("ofdm_modulate: allocation exceeds FFT");
  CVec out(static_cast<std::size_t>(grid.n_symbols()) * (n + cp));
  for (int l = 0; l < grid.n_symbols(); ++l) {
    const CVec useful = ofdm_symbol(grid.symbol(l), n, 1, scaling);
    auto dst = out.begin() + static_cast<std::ptrdiff_t>(l) * (n + cp);
    std::copy(useful.end() - cp, useful.end(), dst);
    std::copy(useful.begin(), useful.end(), dst + cp);
  }
  return out;
}

ResourceGrid ofdm_demodulate(std::span<const cplx> samples, const NumerologyDerived& num,
                             OfdmScaling scaling) {
  const int n = num.cfg.fft_size;
  const int cp = num.cp_samples;
  const int n_sym = num.cfg.symbols_per_slot;
  if (samples.size() != static_cast<std::size_t>(n_sym) * (n + cp))
    throw ConfigError("ofdm_demodulate: expected " + std::to_string(n_sym * (n + cp)) +
                      " samples, got " + std::to_string(samples.size()));
  const int width = num.active_subcarriers();
  ResourceGrid grid(width, n_sym);
  for (int l = 0; l < n_sym; ++l) {
    auto useful = samples.subspan(static_cast<std::size_t>(l) * (n + cp) + cp, n);
    const CVec alloc = ofdm_symbol_demod(useful, width, scaling);
    std::copy(alloc.begin(), alloc.end(), grid.symbol(l).begin());
  }
  return grid;
}

namespace {
CVec blockwise(std::span<const cplx> data, int m_sc, bool inverse) {
  if (m_sc < 1 || data.size() % static_cast<std::size_t>(m_sc) != 0)
    throw ConfigError("transform precoding: length " + std::to_string(data.size()) +
                      " not divisible by block size " + std::to_string(m_sc));
  CVec out(data.size());
  for (std::size_t off = 0; off < data.size(); off += m_sc) {
    auto in = data.subspan(off, m_sc);
    std::span<cplx> o(out.data() + off, static_cast<std::size_t>(m_sc));
    if (inverse)
      dsp::unitary_ifft(in, o);
    else
      dsp::unitary_fft(in, o);
  }
  return out;
}
}  // namespace

CVec transform_precode(std::span<const cplx> data, int m_sc) { return blockwise(data, m_sc, false); }
CVec transform_deprecode(std::span<const cplx> data, int m_sc) { return blockwise(data, m_sc, true); }

std::vector<double> papr_per_period(std::span<const cplx> samples, std::size_t period) {
  if (samples.empty() || period == 0) throw ConfigError("papr: empty input");
  std::vector<double> out;
  out.reserve(samples.size() / period);
  for (std::size_t off = 0; off + period <= samples.size(); off += period) {
    double peak = 0.0;
    double sum = 0.0;
    for (std::size_t i = off; i < off + period; ++i) {
      const double p = std::norm(samples[i]);
      peak = std::max(peak, p);
      sum += p;
    }
    const double mean = sum / static_cast<double>(period);
    out.push_back(mean > 0.0 ? linear_to_db(peak / mean) : 0.0);
  }
  if (out.empty()) throw ConfigError("papr: fewer samples than one period");
  return out;
}

std::vector<CcdfPoint> ccdf_from_papr(std::span<const double> papr_db,
                                      std::span<const double> thresholds_db) {
  if (papr_db.empty()) throw ConfigError("papr: empty input");
  std::vector<double> sorted(papr_db.begin(), papr_db.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CcdfPoint> out;
  out.reserve(thresholds_db.size());
  for (double th : thresholds_db) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), th);
    out.push_back({th, static_cast<double>(above) / static_cast<double>(sorted.size())});
  }
  return out;
}

std::vector<CcdfPoint> papr_ccdf(std::span<const cplx> samples, std::size_t period,
                                 std::span<const double> thresholds_db) {
  const auto papr = papr_per_period(samples, period);
  return ccdf_from_papr(papr, thresholds_db);
}

double ccdf_crossing_db(std::span<const double> papr_db, double level) {
  if (papr_db.empty()) throw ConfigError("papr: empty input");
  std::vector<double> sorted(papr_db.begin(), papr_db.end());
  std::sort(sorted.begin(), sorted.end());
  // Smallest x with P(PAPR > x) <= level.
  const auto n = static_cast<double>(sorted.size());
  const auto allowed = static_cast<std::size_t>(std::floor(level * n));
  const std::size_t idx = sorted.size() - 1 - std::min(allowed, sorted.size() - 1);
  return sorted[idx];
}

}  // namespace mmw
