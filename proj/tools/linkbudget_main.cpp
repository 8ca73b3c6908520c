// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mmw/harness.hpp"
#include "mmw/linkbudget.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Maximum UL/DL link distance per scenario and waveform"};
  std::string scenario;
  std::string out_path;
  app.add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output CSV")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const auto results = mmw::evaluate_links(mmw::load_link_scenarios(scenario));
    for (const auto& r : results)
      std::cerr << r.link.scenario << ' ' << r.link.direction << ' ' << r.link.waveform << ": " << r.distance_m
                << " m (" << r.limiting_factor << ")\n";
    std::ofstream out(out_path);
    if (!out) throw mmw::RuntimeError("cannot write " + out_path);
    mmw::write_csv(out, mmw::link_table(results));
  } catch (const mmw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
