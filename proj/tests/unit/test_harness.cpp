// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <sstream>

#include "mmw/harness.hpp"
#include "oracles.hpp"

using namespace mmw;

namespace {

// Small allocation so each slot is cheap.
SimConfig small(Waveform w = Waveform::ofdm, Modulation m = Modulation::qpsk) {
  SimConfig c;
  c.label = "small";
  c.waveform = w;
  c.numerology = {3, 512, 20, 14};
  c.modulation = m;
  c.snr_db = {4.0};
  c.stop = {10, 40};
  return c;
}

std::string csv_text(const std::vector<SweepResult>& r) {
  std::ostringstream os;
  write_csv(os, sweep_table(r));
  return os.str();
}

}  // namespace

TEST_CASE("seed derivation separates trials and streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(1, t));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(sub_seed(5, 1) != sub_seed(5, 2));
  CHECK(trial_seed(7, 3) == trial_seed(7, 3));
}

TEST_CASE("a clean pipeline makes no errors at any modulation") {
  for (Waveform w : {Waveform::ofdm, Waveform::dfts}) {
    for (Modulation m : {Modulation::qpsk, Modulation::qam16, Modulation::qam64, Modulation::qam256}) {
      auto c = small(w, m);
      const auto r = run_slot_trial(c, 0, std::numeric_limits<double>::infinity());
      CHECK(r.primary.bits == 12u * 240u * static_cast<unsigned>(bits_per_symbol(m)));
      CHECK(r.primary.bit_errors == 0);
      CHECK(r.primary.block_errors == 0);
      CHECK(r.primary.evm_rms() < 1e-10);
    }
  }
}

TEST_CASE("clean pipeline with PTRS, TDL channel and LS estimation at high SNR") {
  auto c = small(Waveform::ofdm, Modulation::qam16);
  c.channel_type = ChannelType::tdl;
  c.rx.channel_estimation = ChannelEstimation::ls;
  c.ptrs = OfdmBlock{1};
  c.rx.ici_order = 2;
  CHECK(run_slot_trial(c, 0, 60.0).primary.bit_errors == 0);
  auto d = small(Waveform::dfts, Modulation::qam16);
  d.ptrs = DftsGroups{4, 2};
  d.rx.pn_compensation = PnCompensation::interp;
  CHECK(run_slot_trial(d, 0, 60.0).primary.bit_errors == 0);
}

TEST_CASE("trials are reproducible and independent of evaluation order") {
  auto c = small();
  c.pn.enabled = true;
  c.pn.tx = builtin_phase_noise_model("bs_gaas");
  c.pn.rx = builtin_phase_noise_model("ue_cmos");
  c.channel_type = ChannelType::tdl;
  const SlotSimulator sim(c);
  const auto b = sim.run(5, 8.0);
  const auto a = sim.run(3, 8.0);
  const auto b2 = sim.run(5, 8.0);
  CHECK(b.primary.bit_errors == b2.primary.bit_errors);
  CHECK(b.primary.evm_error == b2.primary.evm_error);
  CHECK(a.primary.evm_error != b.primary.evm_error);
}

TEST_CASE("noise power is calibrated per subcarrier") {
  auto c = small();
  c.numerology = {3, 4096, 180, 14};
  ErrorTally t;
  for (int i = 0; i < 4; ++i) t.add(run_slot_trial(c, i, 20.0).primary);
  // Equalized error variance is N0/Es = 0.01.
  CHECK(t.evm_error / t.evm_reference == doctest::Approx(0.01).epsilon(0.03));
}

TEST_CASE("OFDM and DFT-s-OFDM agree on flat AWGN") {
  ErrorTally o, d;
  auto co = small(Waveform::ofdm);
  auto cd = small(Waveform::dfts);
  co.numerology = cd.numerology = {3, 4096, 180, 14};
  for (int i = 0; i < 3; ++i) {
    o.add(run_slot_trial(co, i, 6.0).primary);
    d.add(run_slot_trial(cd, i, 6.0).primary);
  }
  const double sigma = std::hypot(oracle::rate_sigma(o.ser(), o.symbols), oracle::rate_sigma(d.ser(), d.symbols));
  CHECK(std::abs(o.ser() - d.ser()) < 3.0 * sigma);
  CHECK(o.ser() == doctest::Approx(oracle::qpsk_ser(std::pow(10.0, 0.6))).epsilon(0.05));
}

TEST_CASE("stop rule ends a point after the requested block errors") {
  auto c = small();
  c.snr_db = {0.0, 30.0};
  c.stop = {10, 40};
  const auto r = run_sweep(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].trials == 10);
  CHECK(r.rows[0].tally.block_errors == 10);
  CHECK(r.rows[1].trials == 40);
  CHECK(r.rows[1].tally.blocks == 40);
  CHECK(r.fingerprint == fingerprint(c));
}

TEST_CASE("error rates fall with SNR within Monte Carlo noise") {
  auto c = small();
  c.snr_db = {0, 2, 4, 6, 8};
  c.stop = {1000, 20};
  const auto r = run_sweep(c);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1].tally;
    const auto& b = r.rows[i].tally;
    const double s = std::hypot(oracle::rate_sigma(a.ser(), a.symbols), oracle::rate_sigma(b.ser(), b.symbols));
    CHECK(b.ser() <= a.ser() + 3.0 * s);
    CHECK(b.bler() <= a.bler() + 3.0 * std::hypot(oracle::rate_sigma(a.bler(), a.blocks),
                                                  oracle::rate_sigma(b.bler(), b.blocks)) + 1e-12);
  }
}

TEST_CASE("sweeps are identical for any worker count") {
  auto c = small(Waveform::dfts, Modulation::qam16);
  c.ptrs = DftsGroups{4, 2};
  c.pn.enabled = true;
  c.pn.tx = builtin_phase_noise_model("bs_gaas");
  c.pn.rx = builtin_phase_noise_model("ue_cmos");
  c.snr_db = {6, 12};
  c.stop = {7, 30};
  c.workers = 1;
  const auto one = csv_text({run_sweep(c)});
  c.workers = 3;
  CHECK(csv_text({run_sweep(c)}) == one);
  c.workers = 8;
  CHECK(csv_text({run_sweep(c)}) == one);
}

TEST_CASE("genie-best reports the better of the two DFT-s estimators") {
  auto c = small(Waveform::dfts, Modulation::qam64);
  c.numerology = {3, 4096, 180, 14};
  c.ptrs = DftsGroups{8, 4};
  c.pn.enabled = true;
  c.pn.tx = builtin_phase_noise_model("bs_gaas");
  c.pn.rx = builtin_phase_noise_model("ue_cmos");
  c.snr_db = {25};
  c.stop = {1000, 4};
  const auto best = run_sweep(c).rows[0];
  c.rx.pn_compensation = PnCompensation::cpe;
  const auto cpe = run_sweep(c).rows[0];
  c.rx.pn_compensation = PnCompensation::interp;
  const auto interp = run_sweep(c).rows[0];
  CHECK(best.tally.ser() == std::min(cpe.tally.ser(), interp.tally.ser()));
  CHECK((best.estimator == "cpe" || best.estimator == "interp"));
  CHECK(cpe.estimator == "cpe");
}

TEST_CASE("required SNR: trivial target, AWGN inversion and unreachable floors") {
  auto c = small();
  c.numerology = {3, 4096, 180, 14};
  c.snr_db = {0.0, 14.0};
  c.stop = {1000, 6};

  auto r = required_snr(c, {Metric::ser, 0.999, 0.25});
  REQUIRE(r.snr_db);
  CHECK(*r.snr_db == 0.0);

  r = required_snr(c, {Metric::ser, 1e-2, 0.25});
  REQUIRE(r.snr_db);
  CHECK(std::abs(*r.snr_db - oracle::qpsk_ser_inverse_db(1e-2)) < 0.3);

  auto p = small(Waveform::ofdm, Modulation::qam256);
  p.numerology = {3, 4096, 180, 14};
  p.pn.enabled = true;
  p.pn.tx = builtin_phase_noise_model("bs_gaas");
  p.pn.rx = builtin_phase_noise_model("ue_cmos");
  p.snr_db = {10.0, 40.0};
  p.stop = {1000, 3};
  const auto u = required_snr(p, {Metric::ser, 1e-2, 0.25});
  CHECK_FALSE(u.snr_db.has_value());
  CHECK(u.floor_estimate > 1e-2 + 3.0 * u.floor_sigma);
  CHECK(u.evaluations == 1);
}

TEST_CASE("PAPR samples are deterministic and per symbol") {
  auto c = small(Waveform::dfts);
  PaprSettings s{50, 4, {}};
  const auto a = papr_samples(c, s);
  c.workers = 4;
  CHECK(papr_samples(c, s) == a);
  CHECK(a.size() == 50);
  for (double v : a) CHECK(v > 0.0);
}

TEST_CASE("config files: cases, overrides and validation") {
  const char* text = R"({
    "waveform": "ofdm", "numerology": {"mu": 4, "n_prb": 90}, "modulation": "16qam",
    "ptrs": {"type": "block", "block_prbs": 4},
    "phase_noise": {"enabled": true, "carrier_hz": 60e9, "tx": "builtin:bs_gaas", "rx": "pn/ue_cmos.json"},
    "channel": {"type": "tdl", "rms_delay_spread_ns": 20, "rician_k_db": 10, "ue_speed_kmh": 30},
    "receiver": {"channel_estimation": "ls", "pn_compensation": "auto", "ici_order": 3},
    "snr_db": {"start": 0, "stop": 10, "step": 2.5},
    "stop": {"min_block_errors": 50, "max_trials": 500},
    "seed": 9,
    "reqsnr": {"metric": "ser", "target": 0.01},
    "cases": [{"label": "a"}, {"label": "b", "ptrs": null, "waveform": "dfts"},
              {"label": "c", "ptrs": {"type": "groups12"}, "waveform": "dfts"}]
  })";
  const auto f = parse_sim_file(text, MMW_DATA_DIR);
  REQUIRE(f.cases.size() == 3);
  const auto& a = f.cases[0];
  CHECK(a.label == "a");
  CHECK(a.numerology.mu == 4);
  CHECK(a.numerology.n_prb == 90);
  CHECK(a.modulation == Modulation::qam16);
  CHECK(std::holds_alternative<OfdmBlock>(*a.ptrs));
  CHECK(a.pn.enabled);
  CHECK(a.pn.rx.name == "ue_cmos");
  CHECK(a.channel_type == ChannelType::tdl);
  CHECK(a.channel.rms_delay_spread_s == doctest::Approx(20e-9));
  CHECK(a.channel.ue_speed_mps == doctest::Approx(30.0 / 3.6));
  CHECK(a.rx.ici_order == 3);
  CHECK(resolved_pn_compensation(a) == PnCompensation::ici);
  CHECK(a.snr_db == std::vector<double>{0, 2.5, 5, 7.5, 10});
  CHECK(a.stop.min_block_errors == 50);
  CHECK(a.base_seed == 9);
  CHECK(f.reqsnr.metric == Metric::ser);
  CHECK_FALSE(f.cases[1].ptrs.has_value());
  CHECK(resolved_pn_compensation(f.cases[1]) == PnCompensation::none);
  CHECK(resolved_pn_compensation(f.cases[2]) == PnCompensation::genie_best);

  CHECK_THROWS_AS(parse_sim_file(R"({"waveform": "dfts", "ptrs": {"type": "block"}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"ptrs": {"type": "distributed"}, "receiver": {"pn_compensation": "ici"}})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"numerology": {"mu": 2}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"snr_db": []})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"receiver": {"codec": "turbo"}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"phase_noise": {"enabled": true, "tx": "missing.json"}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"cases": []})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file(R"({"reqsnr": {"target": 1.5}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_sim_file("[1, 2]", "."), ConfigError);
}

TEST_CASE("fingerprint covers results-affecting settings only") {
  auto c = small();
  const auto fp = fingerprint(c);
  CHECK(fp.size() == 16);
  auto d = c;
  d.workers = 7;
  CHECK(fingerprint(d) == fp);
  d.base_seed = 2;
  CHECK(fingerprint(d) != fp);
  d = c;
  d.snr_db = {5.0};
  CHECK(fingerprint(d) != fp);
}

TEST_CASE("sweep CSV reparses losslessly") {
  auto c = small();
  c.snr_db = {0.0, 3.3, 7.1};
  c.stop = {5, 8};
  auto c2 = c;
  c2.label = "second";
  c2.waveform = Waveform::dfts;
  const std::vector<SweepResult> res{run_sweep(c), run_sweep(c2)};
  const std::string text = csv_text(res);
  std::istringstream in(text);
  const auto parsed = parse_sweep_table(read_csv(in));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].config.label == "second");
  CHECK(parsed[0].fingerprint == res[0].fingerprint);
  for (std::size_t k = 0; k < 2; ++k) {
    REQUIRE(parsed[k].rows.size() == res[k].rows.size());
    for (std::size_t i = 0; i < res[k].rows.size(); ++i) {
      const auto& a = parsed[k].rows[i];
      const auto& b = res[k].rows[i];
      CHECK(a.snr_db == b.snr_db);
      CHECK(a.trials == b.trials);
      CHECK(a.tally.bit_errors == b.tally.bit_errors);
      CHECK(a.tally.ser() == b.tally.ser());
      CHECK(a.tally.bler() == b.tally.bler());
      CHECK(a.estimator == b.estimator);
    }
  }
  std::vector<SweepResult> again = parsed;
  for (std::size_t k = 0; k < 2; ++k) again[k].config = res[k].config;
  CHECK(csv_text(again) == text);
}

namespace {

// Genie-best keeps whichever DFT-s estimator did better over the point.
ErrorTally point_tally(const SimConfig& c, double snr_db, int trials) {
  ErrorTally p, a;
  bool has_alt = false;
  for (int i = 0; i < trials; ++i) {
    const auto r = run_slot_trial(c, static_cast<std::uint64_t>(i), snr_db);
    p.add(r.primary);
    if (r.alternate) {
      a.add(*r.alternate);
      has_alt = true;
    }
  }
  return has_alt && a.ser() < p.ser() ? a : p;
}

}  // namespace

TEST_CASE("with phase noise off CPE-type PTRS receivers cost only their pilot noise") {
  auto plain = small(Waveform::ofdm, Modulation::qam16);
  plain.numerology = {3, 4096, 180, 14};
  const ErrorTally ref = point_tally(plain, 14.0, 6);
  const double ref_evm2 = ref.evm_error / ref.evm_reference;
  struct Variant {
    Waveform w;
    PtrsConfig p;
    double pilots;  // per PTRS symbol
  };
  const Variant variants[] = {{Waveform::ofdm, OfdmDistributed{2, 1}, 90},
                              {Waveform::ofdm, OfdmBlock{4}, 48},
                              {Waveform::dfts, DftsGroups{8, 4}, 32},
                              {Waveform::dfts, DftsEnhanced{}, 48}};
  for (const auto& v : variants) {
    auto c = plain;
    c.waveform = v.w;
    c.ptrs = v.p;
    if (v.w == Waveform::ofdm) c.rx.pn_compensation = PnCompensation::cpe;
    const ErrorTally t = point_tally(c, 14.0, 6);
    // A phase estimate from N pilots adds about 1/(2N) of the noise power.
    const double excess = t.evm_error / t.evm_reference / ref_evm2 - 1.0;
    CHECK(excess > 0.0);
    CHECK(excess < 1.0 / v.pilots);
    CHECK(point_tally(c, 30.0, 2).symbol_errors == 0);
  }
}

TEST_CASE("with phase noise off ICI LS costs only its estimation noise") {
  auto plain = small(Waveform::ofdm, Modulation::qam16);
  plain.numerology = {3, 4096, 180, 14};
  const ErrorTally ref = point_tally(plain, 14.0, 6);
  for (int order : {1, 2, 4}) {
    auto c = plain;
    c.ptrs = OfdmBlock{4};
    c.rx.ici_order = order;
    const ErrorTally t = point_tally(c, 14.0, 6);
    // 2K+1 taps fitted from 48-2K rows; the phase-only correction keeps part of that noise.
    const double excess = t.evm_error / t.evm_reference / (ref.evm_error / ref.evm_reference) - 1.0;
    CHECK(excess > 0.0);
    CHECK(excess < (2.0 * order + 1.0) / (48.0 - 2.0 * order));
    CHECK(point_tally(c, 30.0, 2).symbol_errors == 0);
  }
}
