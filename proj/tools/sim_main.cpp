// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mmw/harness.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int workers = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output CSV")->required();
  cmd->add_option("--workers", o.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Override base_seed of every case");
}

mmw::SimFile load(const Options& o) {
  mmw::SimFile f = mmw::load_sim_file(o.config);
  for (auto& c : f.cases) {
    if (o.workers > 0) c.workers = o.workers;
    if (o.seed) c.base_seed = *o.seed;
  }
  return f;
}

void write(const Options& o, const mmw::CsvTable& t) {
  std::ofstream out(o.out);
  if (!out) throw mmw::RuntimeError("cannot write " + o.out);
  mmw::write_csv(out, t);
  if (!out) throw mmw::RuntimeError("write failed: " + o.out);
}

std::string case_name(const mmw::SimConfig& c, std::size_t i) {
  return c.label.empty() ? "case " + std::to_string(i) : c.label;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level slot simulator: BLER/SER sweeps, required-SNR search, PAPR"};
  app.require_subcommand(1);
  Options o;
  auto* sweep = app.add_subcommand("sweep", "Error rates versus SNR");
  auto* reqsnr = app.add_subcommand("reqsnr", "SNR needed to reach a target BLER or SER");
  auto* papr = app.add_subcommand("papr", "PAPR CCDF of oversampled symbols");
  for (auto* c : {sweep, reqsnr, papr}) add_common(c, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const mmw::SimFile f = load(o);
    if (sweep->parsed()) {
      std::vector<mmw::SweepResult> results;
      for (std::size_t i = 0; i < f.cases.size(); ++i) {
        std::cerr << "sweep " << case_name(f.cases[i], i) << '\n';
        results.push_back(mmw::run_sweep(f.cases[i]));
      }
      write(o, mmw::sweep_table(results));
    } else if (reqsnr->parsed()) {
      std::vector<std::pair<mmw::SimConfig, mmw::RequiredSnrResult>> results;
      for (std::size_t i = 0; i < f.cases.size(); ++i) {
        const auto r = mmw::required_snr(f.cases[i], f.reqsnr);
        std::cerr << "reqsnr " << case_name(f.cases[i], i) << ": "
                  << (r.snr_db ? std::to_string(*r.snr_db) + " dB"
                               : "unreachable (floor " + std::to_string(r.floor_estimate) + ")")
                  << '\n';
        results.emplace_back(f.cases[i], r);
      }
      write(o, mmw::required_snr_table(results, f.reqsnr));
    } else {
      mmw::PaprSettings ps = f.papr;
      if (ps.thresholds_db.empty())
        for (int i = 0; i <= 120; ++i) ps.thresholds_db.push_back(0.1 * i);
      std::vector<std::pair<mmw::SimConfig, std::vector<double>>> results;
      for (std::size_t i = 0; i < f.cases.size(); ++i) {
        auto v = mmw::papr_samples(f.cases[i], ps);
        std::cerr << "papr " << case_name(f.cases[i], i) << ": 1e-3 crossing "
                  << mmw::ccdf_crossing_db(v, 1e-3) << " dB\n";
        results.emplace_back(f.cases[i], std::move(v));
      }
      write(o, mmw::papr_table(results, ps));
    }
  } catch (const mmw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
