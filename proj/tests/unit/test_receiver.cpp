// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>

#include "mmw/fft.hpp"
#include "mmw/receiver.hpp"
#include "oracles.hpp"

using namespace mmw;

namespace {

const std::vector<int> kData{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};

ResourceGrid grid_from(const CVec& cells, int m, int n) {
  ResourceGrid g(m, n);
  std::copy(cells.begin(), cells.end(), g.cells().begin());
  return g;
}

// Y_m = sum_i J_i X_{m-i} on signed offsets, with X zero at DC and outside the allocation.
CVec apply_ici(const CVec& x, const CVec& j, int order, const SubcarrierMap& map) {
  std::map<int, cplx> by_offset;
  for (int k = 0; k < map.width(); ++k) by_offset[map.offset(k)] = x[static_cast<std::size_t>(k)];
  CVec y(x.size());
  for (int k = 0; k < map.width(); ++k) {
    const int m = map.offset(k);
    for (int i = -order; i <= order; ++i) {
      const auto it = by_offset.find(m - i);
      if (it != by_offset.end()) y[static_cast<std::size_t>(k)] += j[static_cast<std::size_t>(i + order)] * it->second;
    }
  }
  return y;
}

}  // namespace

TEST_CASE("LS channel estimate with moving-average smoothing") {
  const int m = 60;
  const CVec dmrs = oracle::random_complex(m, 1);
  const CVec h = oracle::random_complex(m, 2);
  ResourceGrid rx(m, 3);
  for (int k = 0; k < m; ++k) rx.at(k, 1) = h[static_cast<std::size_t>(k)] * dmrs[static_cast<std::size_t>(k)];

  const CVec raw = estimate_channel_ls(rx, 1, dmrs, 1);
  for (int k = 0; k < m; ++k) CHECK(std::abs(raw[static_cast<std::size_t>(k)] - h[static_cast<std::size_t>(k)]) < 1e-12);

  const CVec sm = estimate_channel_ls(rx, 1, dmrs, 7);
  for (int k = 0; k < m; ++k) {
    cplx acc{};
    int cnt = 0;
    for (int t = k - 3; t <= k + 3; ++t)
      if (t >= 0 && t < m) {
        acc += h[static_cast<std::size_t>(t)];
        ++cnt;
      }
    CHECK(std::abs(sm[static_cast<std::size_t>(k)] - acc / static_cast<double>(cnt)) < 1e-12);
  }

  CVec bad = dmrs;
  bad[5] = 0.0;
  CHECK_THROWS_AS(estimate_channel_ls(rx, 1, bad, 7), ConfigError);
  CHECK_THROWS_AS(estimate_channel_ls(rx, 3, dmrs, 7), ConfigError);
  CHECK_THROWS_AS(estimate_channel_ls(rx, 1, dmrs, 0), ConfigError);
}

TEST_CASE("MMSE equalizer and bias removal") {
  const int m = 24, n = 2;
  const CVec x = oracle::random_complex(m * n, 3);
  const CVec hc = oracle::random_complex(m * n, 4);
  CVec yc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) yc[i] = hc[i] * x[i];
  const auto y = grid_from(yc, m, n);
  const auto h = grid_from(hc, m, n);

  auto eq = equalize_mmse(y, h, 0.25);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = std::norm(hc[i]);
    CHECK(std::abs(eq.grid.cells()[i] - std::conj(hc[i]) * yc[i] / (p + 0.25)) < 1e-12);
    CHECK(eq.gain.cells()[i].real() == doctest::Approx(p / (p + 0.25)));
  }
  remove_bias_per_cell(eq);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(eq.grid.cells()[i] - x[i]) < 1e-12);

  auto zf = equalize_mmse(y, h, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(zf.grid.cells()[i] - x[i]) < 1e-12);

  // Per-symbol bias removal divides by the mean gain of that symbol only.
  auto eq2 = equalize_mmse(y, h, 0.25);
  const CVec before(eq2.grid.symbol(1).begin(), eq2.grid.symbol(1).end());
  double mean = 0.0;
  for (auto g : eq2.gain.symbol(0)) mean += g.real();
  mean /= m;
  const cplx first = eq2.grid.at(0, 0);
  remove_bias_per_symbol(eq2, 0);
  CHECK(std::abs(eq2.grid.at(0, 0) - first / mean) < 1e-12);
  CHECK(CVec(eq2.grid.symbol(1).begin(), eq2.grid.symbol(1).end()) == before);

  CHECK_THROWS_AS(equalize_mmse(y, grid_from(hc, n, m), 0.1), ConfigError);
  CHECK_THROWS_AS(equalize_mmse(y, h, -1.0), ConfigError);
}

TEST_CASE("CPE estimate is exact for a constant rotation and interpolates linear drift") {
  const int m = 2160;
  const auto pat = build_pattern(OfdmDistributed{2, 2}, m, kData, 5);
  const CVec x = oracle::random_complex(static_cast<std::size_t>(m) * 14, 6);
  ResourceGrid g(m, 14);
  for (int l = 0; l < 14; ++l)
    for (int k = 0; k < m; ++k) g.at(k, l) = x[static_cast<std::size_t>(l * m + k)];
  for (const auto& s : pat.symbols)
    for (std::size_t i = 0; i < s.indices.size(); ++i) g.at(s.indices[i], s.symbol) = s.pilots[i];

  auto rotate = [&](auto phase_of) {
    EqualizedSlot eq{g, ResourceGrid(m, 14), {}};
    for (int l = 0; l < 14; ++l) derotate(eq.grid.symbol(l), std::polar(1.0, -phase_of(l)));
    return eq;
  };

  const auto flat = estimate_cpe(rotate([](int) { return 0.7; }), pat);
  for (const auto& c : flat) CHECK(std::abs(c - std::polar(1.0, 0.7)) < 1e-12);

  // PTRS on symbols 2, 4, ..., 12; drift of 0.5 rad per symbol wraps past pi.
  const auto drift = estimate_cpe(rotate([](int l) { return 0.5 * l; }), pat);
  for (int l = 2; l <= 12; ++l) CHECK(std::abs(drift[static_cast<std::size_t>(l)] - std::polar(1.0, 0.5 * l)) < 1e-12);
  CHECK(std::abs(drift[13] - std::polar(1.0, 6.0)) < 1e-12);
  CHECK(std::abs(drift[0] - std::polar(1.0, 1.0)) < 1e-12);
}

TEST_CASE("ICI LS recovers synthetic spectral taps exactly without noise") {
  const int m = 2160;
  const SubcarrierMap map(m, 4096);
  const auto pat = build_pattern(OfdmBlock{4}, m, kData, 8);
  const auto& ps = pat.symbols[0];
  for (int order = 0; order <= 4; ++order) {
    CVec x = oracle::random_complex(static_cast<std::size_t>(m), 20 + order);
    for (std::size_t i = 0; i < ps.indices.size(); ++i) x[static_cast<std::size_t>(ps.indices[i])] = ps.pilots[i];
    CVec j = oracle::random_complex(static_cast<std::size_t>(2 * order + 1), 40 + order);
    for (auto& v : j) v *= 0.1;
    j[static_cast<std::size_t>(order)] = std::polar(0.95, 0.3);
    const CVec y = apply_ici(x, j, order, map);

    const IciEstimate est = estimate_ici_ls(y, ps, map, order);
    REQUIRE(est.taps.size() == j.size());
    for (std::size_t i = 0; i < j.size(); ++i) CHECK(std::abs(est.taps[i] - j[i]) < 1e-8);
    CHECK(est.condition < 100.0);
    CHECK(std::abs(est.cpe() - j[static_cast<std::size_t>(order)]) < 1e-8);
  }
}

TEST_CASE("ICI LS reports rank deficiency with the condition number") {
  const int m = 2160;
  const SubcarrierMap map(m, 4096);
  const auto pat = build_pattern(OfdmBlock{1}, m, kData, 8);
  const CVec y(static_cast<std::size_t>(m));
  try {
    estimate_ici_ls(y, pat.symbols[0], map, 5);
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(std::isinf(e.condition()));
  }

  // Constant pilots give collinear columns.
  PtrsSymbol flat = pat.symbols[0];
  for (auto& p : flat.pilots) p = 1.0;
  flat.indices.clear();
  flat.pilots.assign(24, cplx(1.0));
  for (int i = 0; i < 24; ++i) flat.indices.push_back(100 + i);
  CHECK_THROWS_AS(estimate_ici_ls(y, flat, map, 2), RankDeficientError);
}

TEST_CASE("ICI compensation undoes a pure rotation and reduces PN distortion") {
  const int m = 2160, n = 4096;
  const SubcarrierMap map(m, n);
  const CVec x = oracle::random_complex(static_cast<std::size_t>(m), 3);

  IciEstimate rot;
  rot.order = 2;
  rot.taps = {0.0, 0.0, std::polar(1.0, 1.1), 0.0, 0.0};
  CVec rotated = x;
  for (auto& v : rotated) v *= std::polar(1.0, 1.1);
  const CVec back = compensate_ici(rotated, rot, map);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-10);

  // Slow sinusoidal phase over the symbol: taps from the exact phasor spectrum.
  CVec bins(static_cast<std::size_t>(n));
  map.scatter(x, bins);
  CVec t = dsp::ifft(bins);
  CVec phasor(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) phasor[static_cast<std::size_t>(k)] = std::polar(1.0, 0.2 * std::sin(2.0 * oracle::kPi * k / n));
  for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] *= phasor[static_cast<std::size_t>(k)];
  CVec y(static_cast<std::size_t>(m));
  map.gather(dsp::fft(t), y);
  for (auto& v : y) v /= static_cast<double>(n);

  const CVec spec = dsp::fft(phasor);
  IciEstimate est;
  est.order = 3;
  for (int i = -3; i <= 3; ++i) est.taps.push_back(spec[static_cast<std::size_t>((i + n) % n)] / static_cast<double>(n));
  const CVec fixed = compensate_ici(y, est, map);
  double err_before = 0.0, err_after = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err_before += std::norm(y[i] - x[i] * est.cpe());
    err_after += std::norm(fixed[i] - x[i]);
  }
  CHECK(err_after < 1e-2 * err_before);
}

TEST_CASE("DFT-s tracking is exact on an affine phase between group centres") {
  const int m = 2160;
  for (const PtrsConfig cfg : {PtrsConfig{DftsGroups{8, 4}}, PtrsConfig{DftsEnhanced{}}, PtrsConfig{DftsGroups{2, 2}}}) {
    const auto pat = build_pattern(cfg, m, kData, 2);
    const auto& ps = pat.symbols[0];
    CVec block = oracle::random_complex(static_cast<std::size_t>(m), 9);
    for (std::size_t i = 0; i < ps.indices.size(); ++i) block[static_cast<std::size_t>(ps.indices[i])] = ps.pilots[i];
    // Steps between centres stay below pi; crossing +-pi exercises unwrapping.
    const double a = 2.5, b = 0.0025;
    for (int k = 0; k < m; ++k) block[static_cast<std::size_t>(k)] *= std::polar(1.0, a + b * k);

    const PnTrack tr = dfts_pn_track(block, pat, ps);
    const auto c = group_centers(pat, ps);
    for (int k = 0; k < m; ++k) {
      const double expect = a + b * std::clamp(static_cast<double>(k), c.front(), c.back());
      CHECK(std::abs(std::remainder(tr.phase_rad[static_cast<std::size_t>(k)] - expect, 2.0 * oracle::kPi)) < 1e-9);
    }
  }
}

TEST_CASE("DFT-s tracking with one group degenerates to the CPE") {
  PtrsPattern pat;
  pat.domain = PtrsDomain::pre_dft;
  pat.alloc_width = 48;
  pat.n_groups = 1;
  pat.samples_per_group = 4;
  PtrsSymbol s{2, {22, 23, 24, 25}, {1.0, 1.0, 1.0, 1.0}};
  pat.symbols.push_back(s);
  CVec block(48, std::polar(1.0, -0.4));
  const PnTrack tr = dfts_pn_track(block, pat, s);
  for (double p : tr.phase_rad) CHECK(p == doctest::Approx(-0.4));
  CHECK(std::abs(tr.cpe - std::polar(1.0, -0.4)) < 1e-12);
}

TEST_CASE("error counting and the uncoded codec") {
  const Bits tx{0, 0, 1, 1, 0, 1, 1, 0};
  CVec sym = qam_map(tx, Modulation::qpsk);
  auto c = detect_and_count(sym, tx, Modulation::qpsk);
  CHECK(c.bit_errors == 0);
  CHECK(c.symbol_errors == 0);
  CHECK_FALSE(c.block_error);
  sym[1] = -sym[1];  // two bit errors in one symbol
  c = detect_and_count(sym, tx, Modulation::qpsk);
  CHECK(c.bits == 8);
  CHECK(c.bit_errors == 2);
  CHECK(c.symbols == 4);
  CHECK(c.symbol_errors == 1);
  CHECK(c.block_error);
  CHECK_THROWS_AS(detect_and_count(sym, Bits{0, 1}, Modulation::qpsk), ConfigError);

  const auto codec = make_codec("none");
  CHECK(codec->info_bits(100) == 100);
  CHECK(codec->encode(tx, tx.size()) == tx);
  CHECK(codec->decode(std::vector<double>{1.0, -2.0, 0.5}, 3) == Bits{0, 1, 0});
  CHECK_THROWS_AS(make_codec("ldpc"), ConfigError);
}
