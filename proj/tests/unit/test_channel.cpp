// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "mmw/channel.hpp"
#include "mmw/fft.hpp"
#include "oracles.hpp"

using namespace mmw;

TEST_CASE("static FIR propagation equals direct convolution") {
  const CVec x = oracle::random_complex(500, 1);
  const std::vector<int> d{0, 3, 17};
  const CVec g{cplx(0.8, 0.1), cplx(-0.3, 0.2), cplx(0.05, -0.4)};
  const CVec y = propagate(x, static_channel(d, g, x.size()));
  const CVec ref = oracle::convolve(x, d, g);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-12);
  CHECK(propagate(x, identity_channel(x.size())) == x);
  CHECK_THROWS_AS(propagate(x, identity_channel(10)), ConfigError);
  CHECK_THROWS_AS(static_channel({0, 1}, {cplx(1.0)}, 10), ConfigError);
}

TEST_CASE("frequency response predicts the demodulated channel inside the CP") {
  const auto num = derive({3, 4096, 180, 14});
  const int m = num.active_subcarriers();
  const SubcarrierMap map(m, 4096);
  const std::vector<int> d{0, 5, 40, 200};
  const CVec g{cplx(0.9, 0.0), cplx(0.2, 0.3), cplx(-0.1, 0.1), cplx(0.05, 0.02)};
  const auto ch = static_channel(d, g, static_cast<std::size_t>(num.samples_per_slot()));

  ResourceGrid grid(m, 14);
  const CVec s = oracle::random_complex(grid.cells().size(), 5);
  std::copy(s.begin(), s.end(), grid.cells().begin());
  const ResourceGrid rx = ofdm_demodulate(propagate(ofdm_modulate(grid, num), ch), num);
  const CVec h = frequency_response(ch, 0, map);
  for (int l = 1; l < 14; ++l)
    for (int k = 0; k < m; k += 37) CHECK(std::abs(rx.at(k, l) - h[static_cast<std::size_t>(k)] * grid.at(k, l)) < 1e-9);
}

TEST_CASE("TDL profile: unit power, LOS share and RMS delay spread") {
  ChannelConfig cfg;
  const double fs = 491.52e6;
  const auto ch = build_tdl(cfg, fs, 61376, 3);
  CHECK(std::accumulate(ch.powers.begin(), ch.powers.end(), 0.0) == doctest::Approx(1.0));
  CHECK(ch.delays.front() == 0);
  CHECK(std::is_sorted(ch.delays.begin(), ch.delays.end()));
  const double k = std::pow(10.0, 1.5);
  CHECK(ch.powers.front() > k / (k + 1.0));
  CHECK(ch.rms_delay_spread_s(fs) == doctest::Approx(cfg.rms_delay_spread_s).epsilon(0.05));
  CHECK(ch.warnings.empty());

  cfg.rms_delay_spread_s = 30e-9;
  cfg.rician_k_db = 0.0;
  const auto wide = build_tdl(cfg, 3932.16e6, 61376, 3);
  CHECK(wide.rms_delay_spread_s(3932.16e6) == doctest::Approx(30e-9).epsilon(0.02));
}

TEST_CASE("unresolvable delay spread collapses to a flat channel with a warning") {
  ChannelConfig cfg;
  cfg.rms_delay_spread_s = 0.1e-9;
  const auto ch = build_tdl(cfg, 100e6, 1000, 1);
  CHECK(ch.n_taps() == 1);
  CHECK_FALSE(ch.warnings.empty());
}

TEST_CASE("pure LOS without motion is a unit constant") {
  ChannelConfig cfg;
  cfg.rician_k_db = std::numeric_limits<double>::infinity();
  cfg.ue_speed_mps = 0.0;
  const auto ch = build_tdl(cfg, 491.52e6, 5000, 9);
  REQUIRE(ch.n_taps() == 1);
  const cplx g0 = ch.gain(0, 0);
  CHECK(std::abs(g0) == doctest::Approx(1.0));
  CHECK(std::abs(ch.gain(0, 4999) - g0) < 1e-12);
}

TEST_CASE("realizations are seeded and average to the profile") {
  ChannelConfig cfg;
  cfg.rician_k_db = 3.0;
  const double fs = 491.52e6;
  const auto a = build_tdl(cfg, fs, 4384, 5);
  const auto b = build_tdl(cfg, fs, 4384, 5);
  CHECK(a.gains == b.gains);
  std::vector<double> acc(a.n_taps(), 0.0);
  const int runs = 2000;
  for (int r = 0; r < runs; ++r) {
    const auto c = build_tdl(cfg, fs, 4384, 100 + r);
    REQUIRE(c.n_taps() == a.n_taps());
    for (std::size_t t = 0; t < c.n_taps(); ++t) acc[t] += std::norm(c.gain(t, 0));
  }
  for (std::size_t t = 0; t < a.n_taps(); ++t) CHECK(acc[t] / runs == doctest::Approx(a.powers[t]).epsilon(0.1));
}

TEST_CASE("Rayleigh tap time correlation follows J0") {
  ChannelConfig cfg;
  cfg.n_taps = 1;
  cfg.rician_k_db = -300.0;
  cfg.ue_speed_mps = 30.0;
  const double fs = 1e6;
  const double fd = max_doppler(cfg.ue_speed_mps, cfg.carrier_hz);
  const std::size_t lag = static_cast<std::size_t>(0.2 / fd * fs);
  cplx corr{};
  double pow0 = 0.0;
  const int runs = 3000;
  for (int r = 0; r < runs; ++r) {
    const auto ch = build_tdl(cfg, fs, lag + 1, 7000 + r);
    corr += ch.gain(0, lag) * std::conj(ch.gain(0, 0));
    pow0 += std::norm(ch.gain(0, 0));
  }
  CHECK((corr / pow0).real() == doctest::Approx(std::cyl_bessel_j(0.0, 2.0 * oracle::kPi * 0.2)).epsilon(0.1));
}

TEST_CASE("Doppler at 60 GHz") {
  CHECK(max_doppler(3.0 / 3.6, 60e9) == doctest::Approx(166.782).epsilon(1e-4));
  CHECK(max_doppler(0.0, 60e9) == 0.0);
  CHECK_THROWS_AS(max_doppler(-1.0, 60e9), ConfigError);
}

TEST_CASE("AWGN variance and common random numbers") {
  const CVec zero(200000);
  const CVec n10 = awgn(zero, 10.0, 2.0, 17);
  double p = 0.0;
  for (auto& v : n10) p += std::norm(v);
  CHECK(p / n10.size() == doctest::Approx(0.2).epsilon(0.01));

  const CVec n20 = awgn(zero, 20.0, 2.0, 17);
  for (std::size_t i = 0; i < 100; ++i) CHECK(std::abs(n20[i] * std::sqrt(10.0) - n10[i]) < 1e-12);
  const CVec x = oracle::random_complex(16, 2);
  CHECK(awgn(x, std::numeric_limits<double>::infinity(), 1.0, 3) == x);
}
