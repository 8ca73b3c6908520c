// SPDX-License-Identifier: Apache-2.0
#include "mmw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "mmw/fft.hpp"

namespace mmw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(base_seed) ^ trial_index);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

void ErrorTally::add(const ErrorTally& o) {
  bits += o.bits;
  bit_errors += o.bit_errors;
  symbols += o.symbols;
  symbol_errors += o.symbol_errors;
  blocks += o.blocks;
  block_errors += o.block_errors;
  evm_error += o.evm_error;
  evm_reference += o.evm_reference;
}

namespace {

// Seed streams within one trial.
enum Stream : std::uint64_t { kBits = 1, kPnTx, kPnRx, kChannel, kNoise, kControl };
// Seed streams fixed per configuration.
enum ConfigStream : std::uint64_t { kPtrsPilots = 101, kDmrs };

constexpr int kControlSymbol = 0;
constexpr int kDmrsSymbol = 1;

Bits random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits b(n);
  std::size_t i = 0;
  while (i < n) {
    std::uint64_t w = rng();
    for (int k = 0; k < 64 && i < n; ++k, ++i) {
      b[i] = static_cast<std::uint8_t>(w & 1U);
      w >>= 1;
    }
  }
  return b;
}

CVec random_qpsk(std::size_t n, std::uint64_t seed) {
  return qam_map(random_bits(2 * n, seed), Modulation::qpsk);
}

// Ascending complement of `used` in [0, width).
std::vector<int> complement(const std::vector<int>& used, int width) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(width));
  std::size_t u = 0;
  for (int k = 0; k < width; ++k) {
    if (u < used.size() && used[u] == k) {
      ++u;
      continue;
    }
    out.push_back(k);
  }
  return out;
}

ErrorTally to_tally(const ErrorCount& c, std::span<const cplx> eq, std::span<const cplx> ref) {
  ErrorTally t;
  t.bits = c.bits;
  t.bit_errors = c.bit_errors;
  t.symbols = c.symbols;
  t.symbol_errors = c.symbol_errors;
  t.blocks = 1;
  t.block_errors = c.block_error ? 1 : 0;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    t.evm_error += std::norm(eq[i] - ref[i]);
    t.evm_reference += std::norm(ref[i]);
  }
  return t;
}

}  // namespace

struct SlotSimulator::Impl {
  SimConfig cfg;
  NumerologyDerived num;
  int m = 0;
  SubcarrierMap map{12, 16};
  std::vector<int> data_symbols;
  std::optional<PtrsPattern> pattern;
  std::vector<std::vector<int>> data_positions;  // per data symbol
  CVec dmrs;
  PnCompensation comp = PnCompensation::none;
  std::optional<PhaseNoiseSynthesizer> pn_tx;
  std::optional<PhaseNoiseSynthesizer> pn_rx;
  std::unique_ptr<Codec> codec;
  std::size_t coded_bits = 0;
  std::size_t info_bits = 0;

  explicit Impl(const SimConfig& c) : cfg(c) {
    validate(cfg);
    num = derive(cfg.numerology);
    m = num.active_subcarriers();
    map = SubcarrierMap(m, cfg.numerology.fft_size);
    for (int l = kDmrsSymbol + 1; l < cfg.numerology.symbols_per_slot; ++l) data_symbols.push_back(l);
    if (cfg.ptrs) pattern = build_pattern(*cfg.ptrs, m, data_symbols, sub_seed(cfg.base_seed, kPtrsPilots));
    for (int l : data_symbols) {
      const PtrsSymbol* ps = pattern ? pattern->find(l) : nullptr;
      data_positions.push_back(complement(ps ? ps->indices : std::vector<int>{}, m));
    }
    dmrs = random_qpsk(static_cast<std::size_t>(m), sub_seed(cfg.base_seed, kDmrs));
    comp = resolved_pn_compensation(cfg);
    if (cfg.pn.enabled) {
      const std::size_t n = std::max<std::size_t>(
          std::size_t{1} << 14, dsp::next_power_of_two(static_cast<std::size_t>(num.samples_per_slot())));
      pn_tx.emplace(scale_to_carrier(cfg.pn.tx, cfg.pn.carrier_hz), n, num.sampling_rate_hz);
      pn_rx.emplace(scale_to_carrier(cfg.pn.rx, cfg.pn.carrier_hz), n, num.sampling_rate_hz);
    }
    codec = make_codec(cfg.rx.codec);
    const auto q = static_cast<std::size_t>(bits_per_symbol(cfg.modulation));
    for (const auto& d : data_positions) coded_bits += d.size() * q;
    info_bits = codec->info_bits(coded_bits);
  }

  TrialRecord run(std::uint64_t trial_index, double snr_db) const;
};

TrialRecord SlotSimulator::Impl::run(std::uint64_t trial_index, double snr_db) const {
  const std::uint64_t seed = trial_seed(cfg.base_seed, trial_index);
  const int n_sym = cfg.numerology.symbols_per_slot;
  const int n_fft = cfg.numerology.fft_size;
  const auto q = static_cast<std::size_t>(bits_per_symbol(cfg.modulation));

  // Transmit grid.
  const Bits info = random_bits(info_bits, sub_seed(seed, kBits));
  const Bits coded = codec->encode(info, coded_bits);
  const CVec data = qam_map(coded, cfg.modulation);

  ResourceGrid tx(m, n_sym);
  const CVec control = random_qpsk(static_cast<std::size_t>(m), sub_seed(seed, kControl));
  std::copy(control.begin(), control.end(), tx.symbol(kControlSymbol).begin());
  std::copy(dmrs.begin(), dmrs.end(), tx.symbol(kDmrsSymbol).begin());

  std::size_t cursor = 0;
  for (std::size_t d = 0; d < data_symbols.size(); ++d) {
    const int l = data_symbols[d];
    const PtrsSymbol* ps = pattern ? pattern->find(l) : nullptr;
    CVec block(static_cast<std::size_t>(m));
    for (int pos : data_positions[d]) block[static_cast<std::size_t>(pos)] = data[cursor++];
    if (ps)
      for (std::size_t i = 0; i < ps->indices.size(); ++i) block[static_cast<std::size_t>(ps->indices[i])] = ps->pilots[i];
    if (cfg.waveform == Waveform::dfts) block = transform_precode(block, m);
    std::copy(block.begin(), block.end(), tx.symbol(l).begin());
  }

  CVec samples = ofdm_modulate(tx, num);
  const std::size_t n_samples = samples.size();

  if (pn_tx) {
    const auto traj = pn_tx->generate(sub_seed(seed, kPnTx));
    apply_in_place(samples, std::span<const double>(traj.phase_rad).first(n_samples));
  }

  std::optional<ChannelRealization> channel;
  if (cfg.channel_type == ChannelType::tdl) {
    channel = build_tdl(cfg.channel, num.sampling_rate_hz, n_samples, sub_seed(seed, kChannel));
    samples = propagate(samples, *channel);
  }

  // Per-subcarrier Es/N0: unit-power scaling puts N/M of the sample power on
  // each active subcarrier after demodulation.
  const double sig_ref = static_cast<double>(n_fft) / static_cast<double>(m);
  add_awgn(samples, snr_db, sig_ref, sub_seed(seed, kNoise));

  if (pn_rx) {
    const auto traj = pn_rx->generate(sub_seed(seed, kPnRx));
    apply_in_place(samples, std::span<const double>(traj.phase_rad).first(n_samples));
  }

  const ResourceGrid rx = ofdm_demodulate(samples, num);
  const double nv = std::isinf(snr_db) && snr_db > 0 ? 0.0 : 1.0 / db_to_linear(snr_db);

  EqualizedSlot eq;
  if (cfg.rx.channel_estimation == ChannelEstimation::ls) {
    eq = equalize_mmse(rx, estimate_channel_ls(rx, kDmrsSymbol, dmrs, cfg.rx.smoothing_window), nv);
  } else if (channel) {
    ResourceGrid h(m, n_sym);
    for (int l = 0; l < n_sym; ++l) {
      const auto at = static_cast<std::size_t>(l * num.samples_per_symbol() + num.cp_samples + n_fft / 2);
      const CVec hl = frequency_response(*channel, at, map);
      std::copy(hl.begin(), hl.end(), h.symbol(l).begin());
    }
    eq = equalize_mmse(rx, h, nv);
  } else {
    eq = equalize_mmse(rx, CVec(static_cast<std::size_t>(m), cplx(1.0, 0.0)), nv);
  }

  // Up to two estimator variants: [0] is the reported one, [1] the genie-best alternate.
  const bool two = comp == PnCompensation::genie_best;
  std::vector<CVec> detected(two ? 2 : 1);
  for (auto& v : detected) v.reserve(data.size());

  if (cfg.waveform == Waveform::ofdm) {
    remove_bias_per_cell(eq);
    if (comp == PnCompensation::cpe) {
      const CVec cpe = estimate_cpe(eq, *pattern);
      for (int l : data_symbols) derotate(eq.grid.symbol(l), cpe[static_cast<std::size_t>(l)]);
    }
    for (std::size_t d = 0; d < data_symbols.size(); ++d) {
      const int l = data_symbols[d];
      std::span<const cplx> sym = eq.grid.symbol(l);
      CVec fixed;
      if (comp == PnCompensation::ici) {
        if (const PtrsSymbol* ps = pattern->find(l)) {
          fixed = compensate_ici(sym, estimate_ici_ls(sym, *ps, map, cfg.rx.ici_order), map);
          sym = fixed;
        }
      }
      for (int pos : data_positions[d]) detected[0].push_back(sym[static_cast<std::size_t>(pos)]);
    }
  } else {
    for (std::size_t d = 0; d < data_symbols.size(); ++d) {
      const int l = data_symbols[d];
      remove_bias_per_symbol(eq, l);
      const CVec block = transform_deprecode(eq.grid.symbol(l), m);
      const PtrsSymbol* ps = pattern ? pattern->find(l) : nullptr;
      const auto& pos = data_positions[d];
      if (!ps || comp == PnCompensation::none) {
        for (int p : pos) detected[0].push_back(block[static_cast<std::size_t>(p)]);
        continue;
      }
      const PnTrack track = dfts_pn_track(block, *pattern, *ps);
      const cplx cpe_rot = std::conj(track.cpe);
      auto interp = [&](int p) { return block[static_cast<std::size_t>(p)] * std::polar(1.0, -track.phase_rad[static_cast<std::size_t>(p)]); };
      if (comp == PnCompensation::cpe) {
        for (int p : pos) detected[0].push_back(block[static_cast<std::size_t>(p)] * cpe_rot);
      } else {
        for (int p : pos) detected[0].push_back(interp(p));
        if (two)
          for (int p : pos) detected[1].push_back(block[static_cast<std::size_t>(p)] * cpe_rot);
      }
    }
  }

  TrialRecord rec;
  rec.trial_index = trial_index;
  const double llr_nv = std::max(nv, 1e-12);
  for (std::size_t v = 0; v < detected.size(); ++v) {
    const ErrorCount c = detect_and_count(detected[v], coded, cfg.modulation, *codec, llr_nv, info);
    const ErrorTally t = to_tally(c, detected[v], data);
    if (v == 0) rec.primary = t;
    else rec.alternate = t;
  }
  return rec;
}

SlotSimulator::SlotSimulator(const SimConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
SlotSimulator::~SlotSimulator() = default;

TrialRecord SlotSimulator::run(std::uint64_t trial_index, double snr_db) const {
  try {
    return impl_->run(trial_index, snr_db);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw RuntimeError("trial " + std::to_string(trial_index) + " at " + std::to_string(snr_db) +
                       " dB (" + impl_->cfg.label + "): " + e.what());
  }
}

const SimConfig& SlotSimulator::config() const { return impl_->cfg; }
const NumerologyDerived& SlotSimulator::numerology() const { return impl_->num; }

TrialRecord run_slot_trial(const SimConfig& cfg, std::uint64_t trial_index, double snr_db) {
  return SlotSimulator(cfg).run(trial_index, snr_db);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

// Genie-best: whichever of the two estimators scores lower on the metric
// over the whole point; ties keep the primary one.
SweepRow reduce_point(double snr_db, const std::vector<TrialRecord>& recs, std::size_t used,
                      PnCompensation comp, Metric metric) {
  ErrorTally primary;
  ErrorTally alternate;
  bool has_alt = false;
  for (std::size_t i = 0; i < used; ++i) {
    primary.add(recs[i].primary);
    if (recs[i].alternate) {
      alternate.add(*recs[i].alternate);
      has_alt = true;
    }
  }
  SweepRow row;
  row.snr_db = snr_db;
  row.trials = used;
  const bool pick_alt = has_alt && (alternate.metric(metric) < primary.metric(metric) ||
                                    (alternate.metric(metric) == primary.metric(metric) &&
                                     alternate.symbol_errors < primary.symbol_errors));
  row.tally = pick_alt ? alternate : primary;
  if (comp == PnCompensation::genie_best) row.estimator = pick_alt ? "cpe" : "interp";
  else row.estimator = to_string(comp);
  return row;
}

std::size_t batch_size(int workers) { return static_cast<std::size_t>(std::max(workers, 1)) * 4; }

}  // namespace

SweepRow run_point(const SlotSimulator& sim, double snr_db, std::uint64_t trials, Metric metric) {
  std::vector<TrialRecord> recs(trials);
  parallel_for(trials, sim.config().workers, [&](std::size_t i) { recs[i] = sim.run(i, snr_db); });
  return reduce_point(snr_db, recs, recs.size(), resolved_pn_compensation(sim.config()), metric);
}

SweepResult run_sweep(const SimConfig& cfg) {
  const SlotSimulator sim(cfg);
  SweepResult res;
  res.config = cfg;
  res.fingerprint = fingerprint(cfg);
  const auto max_trials = static_cast<std::size_t>(cfg.stop.max_trials);
  const auto need = static_cast<std::uint64_t>(cfg.stop.min_block_errors);
  const std::size_t batch = batch_size(cfg.workers);

  for (double snr : cfg.snr_db) {
    std::vector<TrialRecord> recs;
    recs.reserve(std::min(max_trials, batch * 4));
    std::uint64_t err_primary = 0;
    std::uint64_t err_alt = 0;
    std::size_t used = 0;
    bool done = false;
    while (!done && recs.size() < max_trials) {
      const std::size_t start = recs.size();
      const std::size_t count = std::min(batch, max_trials - start);
      recs.resize(start + count);
      parallel_for(count, cfg.workers, [&](std::size_t i) { recs[start + i] = sim.run(start + i, snr); });
      // Stop decisions in trial-index order keep results independent of the batch size.
      for (std::size_t i = start; i < start + count; ++i) {
        err_primary += recs[i].primary.block_errors;
        if (recs[i].alternate) err_alt += recs[i].alternate->block_errors;
        else err_alt = err_primary;
        used = i + 1;
        if (std::min(err_primary, err_alt) >= need) {
          done = true;
          break;
        }
      }
    }
    res.rows.push_back(reduce_point(snr, recs, used, resolved_pn_compensation(cfg), Metric::ser));
  }
  return res;
}

RequiredSnrResult required_snr(const SimConfig& cfg, const RequiredSnrSettings& settings) {
  if (!(settings.target > 0.0 && settings.target < 1.0)) throw ConfigError("target must be in (0, 1)");
  const SlotSimulator sim(cfg);
  const auto trials = static_cast<std::uint64_t>(cfg.stop.max_trials);
  RequiredSnrResult out;
  std::map<double, SweepRow> memo;
  auto eval = [&](double snr) -> const SweepRow& {
    auto it = memo.find(snr);
    if (it == memo.end()) {
      it = memo.emplace(snr, run_point(sim, snr, trials, settings.metric)).first;
      ++out.evaluations;
    }
    return it->second;
  };
  auto units = [&](const ErrorTally& t) {
    return static_cast<double>(settings.metric == Metric::bler ? t.blocks : t.symbols);
  };

  double lo = *std::min_element(cfg.snr_db.begin(), cfg.snr_db.end());
  double hi = *std::max_element(cfg.snr_db.begin(), cfg.snr_db.end());
  const SweepRow& top = eval(hi);
  const double m_top = top.tally.metric(settings.metric);
  out.floor_estimate = m_top;
  out.floor_sigma = std::sqrt(std::max(m_top * (1.0 - m_top), 0.0) / std::max(units(top.tally), 1.0));
  if (m_top > settings.target) return out;

  double m_lo = eval(lo).tally.metric(settings.metric);
  if (m_lo <= settings.target) {
    out.snr_db = lo;
    return out;
  }
  double m_hi = m_top;
  while (hi - lo > settings.resolution_db) {
    const double mid = 0.5 * (lo + hi);
    const double mm = eval(mid).tally.metric(settings.metric);
    if (mm > settings.target) {
      lo = mid;
      m_lo = mm;
    } else {
      hi = mid;
      m_hi = mm;
    }
  }
  // Log-metric interpolation inside the final bracket; a zero upper metric
  // falls back to linear interpolation.
  double t;
  if (m_hi > 0.0)
    t = (std::log(m_lo) - std::log(settings.target)) / (std::log(m_lo) - std::log(m_hi));
  else
    t = (m_lo - settings.target) / m_lo;
  out.snr_db = lo + std::clamp(t, 0.0, 1.0) * (hi - lo);
  return out;
}

std::vector<double> papr_samples(const SimConfig& cfg, const PaprSettings& settings) {
  validate(cfg);
  const NumerologyDerived num = derive(cfg.numerology);
  const int m = num.active_subcarriers();
  const auto q = static_cast<std::size_t>(bits_per_symbol(cfg.modulation));
  std::vector<double> out(static_cast<std::size_t>(settings.symbols));
  parallel_for(out.size(), cfg.workers, [&](std::size_t i) {
    CVec alloc = qam_map(random_bits(q * static_cast<std::size_t>(m), trial_seed(cfg.base_seed, i)), cfg.modulation);
    if (cfg.waveform == Waveform::dfts) alloc = transform_precode(alloc, m);
    const CVec x = ofdm_symbol(alloc, cfg.numerology.fft_size, settings.oversample);
    out[i] = papr_per_period(x, x.size()).front();
  });
  return out;
}

namespace {

const std::vector<std::string> kSweepHeader{"case", "snr_db", "trials", "bits", "bit_errors", "symbols",
                                            "symbol_errors", "blocks", "block_errors", "ber", "ser", "bler",
                                            "evm_rms", "estimator"};

std::string u64(std::uint64_t v) { return std::to_string(v); }

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::string combined_fingerprint(const std::vector<SweepResult>& results) {
  std::string all;
  for (const auto& r : results) all += r.fingerprint;
  return fnv1a_hex(all);
}

}  // namespace

CsvTable sweep_table(const std::vector<SweepResult>& results) {
  CsvTable t;
  t.header = kSweepHeader;
  t.comments.push_back("config fingerprint " + combined_fingerprint(results));
  for (std::size_t c = 0; c < results.size(); ++c) {
    const auto& r = results[c];
    t.comments.push_back("case " + std::to_string(c) + " " + r.fingerprint + " " +
                         (r.config.label.empty() ? "-" : r.config.label));
    for (const auto& row : r.rows) {
      const auto& k = row.tally;
      t.rows.push_back({std::to_string(c), format_double(row.snr_db), u64(row.trials), u64(k.bits),
                        u64(k.bit_errors), u64(k.symbols), u64(k.symbol_errors), u64(k.blocks),
                        u64(k.block_errors), format_double(k.ber()), format_double(k.ser()),
                        format_double(k.bler()), format_double(k.evm_rms()), row.estimator});
    }
  }
  return t;
}

std::vector<SweepResult> parse_sweep_table(const CsvTable& t) {
  for (const auto& h : kSweepHeader) t.column(h);
  std::vector<SweepResult> out;
  for (const auto& c : t.comments) {
    if (c.rfind("case ", 0) != 0) continue;
    std::istringstream is(c.substr(5));
    std::size_t idx = 0;
    SweepResult r;
    std::string label;
    is >> idx >> r.fingerprint >> label;
    if (!is || idx != out.size()) throw ConfigError("malformed case comment: '" + c + "'");
    r.config.label = label == "-" ? "" : label;
    out.push_back(std::move(r));
  }
  const auto col = [&](const char* name) { return t.column(name); };
  for (const auto& f : t.rows) {
    const auto c = static_cast<std::size_t>(parse_u64(f[col("case")]));
    if (c >= out.size()) throw ConfigError("sweep row refers to unknown case " + f[col("case")]);
    SweepRow row;
    row.snr_db = parse_double(f[col("snr_db")]);
    row.trials = parse_u64(f[col("trials")]);
    row.tally.bits = parse_u64(f[col("bits")]);
    row.tally.bit_errors = parse_u64(f[col("bit_errors")]);
    row.tally.symbols = parse_u64(f[col("symbols")]);
    row.tally.symbol_errors = parse_u64(f[col("symbol_errors")]);
    row.tally.blocks = parse_u64(f[col("blocks")]);
    row.tally.block_errors = parse_u64(f[col("block_errors")]);
    // EVM sums are not stored; keep the ratio exact with a unit reference.
    const double evm = parse_double(f[col("evm_rms")]);
    row.tally.evm_error = evm * evm;
    row.tally.evm_reference = 1.0;
    row.estimator = f[col("estimator")];
    out[c].rows.push_back(row);
  }
  return out;
}

CsvTable required_snr_table(const std::vector<std::pair<SimConfig, RequiredSnrResult>>& results,
                            const RequiredSnrSettings& settings) {
  CsvTable t;
  t.header = {"label", "waveform", "modulation", "mu", "ptrs", "pn", "metric", "target", "required_snr_db",
              "floor_estimate", "evaluations"};
  std::string fp;
  for (const auto& [cfg, r] : results) fp += fingerprint(cfg);
  t.comments.push_back("config fingerprint " + fnv1a_hex(fp));
  for (const auto& [cfg, r] : results) {
    t.rows.push_back({cfg.label.empty() ? "-" : cfg.label, to_string(cfg.waveform), to_string(cfg.modulation),
                      std::to_string(cfg.numerology.mu), cfg.ptrs ? ptrs_name(*cfg.ptrs) : "none",
                      cfg.pn.enabled ? "on" : "off", to_string(settings.metric), format_double(settings.target),
                      r.snr_db ? format_double(*r.snr_db) : "unreachable", format_double(r.floor_estimate),
                      std::to_string(r.evaluations)});
  }
  return t;
}

CsvTable papr_table(const std::vector<std::pair<SimConfig, std::vector<double>>>& results,
                    const PaprSettings& settings) {
  CsvTable t;
  t.header = {"label", "waveform", "modulation", "threshold_db", "ccdf"};
  std::string fp;
  for (const auto& [cfg, v] : results) fp += fingerprint(cfg);
  t.comments.push_back("config fingerprint " + fnv1a_hex(fp));
  t.comments.push_back("symbols " + std::to_string(settings.symbols) + " oversample " +
                       std::to_string(settings.oversample));
  for (const auto& [cfg, papr] : results) {
    for (const auto& p : ccdf_from_papr(papr, settings.thresholds_db)) {
      t.rows.push_back({cfg.label.empty() ? "-" : cfg.label, to_string(cfg.waveform), to_string(cfg.modulation),
                        format_double(p.threshold_db), format_double(p.ccdf)});
    }
  }
  return t;
}

CsvTable link_table(const std::vector<LinkResult>& results) {
  CsvTable t;
  t.header = {"scenario", "direction", "waveform", "distance_m", "limiting_factor"};
  for (const auto& r : results)
    t.rows.push_back({r.link.scenario, r.link.direction, r.link.waveform, format_double(r.distance_m),
                      r.limiting_factor});
  return t;
}

}  // namespace mmw
