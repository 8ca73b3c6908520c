// SPDX-License-Identifier: Apache-2.0
#include "mmw/ptrs.hpp"

#include <algorithm>
#include <random>

#include "mmw/numerology.hpp"

namespace mmw {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<int> frequency_indices(const PtrsConfig& cfg, int alloc) {
  std::vector<int> idx;
  std::visit(overloaded{
                 [&](const OfdmDistributed& c) {
                   const int n_prb = alloc / kSubcarriersPerPrb;
                   for (int prb = 0; prb < n_prb; prb += c.every_nth_prb)
                     idx.push_back(prb * kSubcarriersPerPrb);
                 },
                 [&](const OfdmBlock& c) {
                   const int width = kSubcarriersPerPrb * c.block_prbs;
                   const int start = (alloc - width) / 2;
                   for (int i = 0; i < width; ++i) idx.push_back(start + i);
                 },
                 [](const auto&) {},
             },
             cfg);
  return idx;
}

std::vector<int> pre_dft_indices(int n_groups, int per_group, int alloc) {
  std::vector<int> idx;
  for (int g = 0; g < n_groups; ++g) {
    const int center = static_cast<int>((2 * g + 1) * static_cast<long long>(alloc) / (2 * n_groups));
    for (int t = 0; t < per_group; ++t) idx.push_back(center - per_group / 2 + t);
  }
  return idx;
}

int groups_of(const PtrsConfig& cfg) {
  if (auto* g = std::get_if<DftsGroups>(&cfg)) return g->n_groups;
  if (std::holds_alternative<DftsEnhanced>(cfg)) return DftsEnhanced::n_groups;
  return 0;
}

int per_group_of(const PtrsConfig& cfg) {
  if (auto* g = std::get_if<DftsGroups>(&cfg)) return g->samples_per_group;
  if (std::holds_alternative<DftsEnhanced>(cfg)) return DftsEnhanced::samples_per_group;
  return 0;
}

std::vector<int> indices_for(const PtrsConfig& cfg, int alloc) {
  if (ptrs_domain(cfg) == PtrsDomain::frequency) return frequency_indices(cfg, alloc);
  return pre_dft_indices(groups_of(cfg), per_group_of(cfg), alloc);
}

int time_density(const PtrsConfig& cfg) {
  if (auto* d = std::get_if<OfdmDistributed>(&cfg)) return d->time_density;
  return 1;
}

}  // namespace

const PtrsSymbol* PtrsPattern::find(int symbol) const {
  for (const auto& s : symbols)
    if (s.symbol == symbol) return &s;
  return nullptr;
}

std::size_t PtrsPattern::resource_count() const {
  std::size_t n = 0;
  for (const auto& s : symbols) n += s.indices.size();
  return n;
}

std::string ptrs_name(const PtrsConfig& cfg) {
  return std::visit(overloaded{
                        [](const OfdmDistributed&) { return std::string("distributed"); },
                        [](const OfdmBlock&) { return std::string("block"); },
                        [](const DftsGroups&) { return std::string("groups"); },
                        [](const DftsEnhanced&) { return std::string("groups12"); },
                    },
                    cfg);
}

PtrsDomain ptrs_domain(const PtrsConfig& cfg) {
  return std::holds_alternative<OfdmDistributed>(cfg) || std::holds_alternative<OfdmBlock>(cfg)
             ? PtrsDomain::frequency
             : PtrsDomain::pre_dft;
}

void validate(const PtrsConfig& cfg, int alloc) {
  if (alloc < kSubcarriersPerPrb) throw ConfigError("ptrs: allocation smaller than one PRB");
  std::visit(
      overloaded{
          [&](const OfdmDistributed& c) {
            if (c.every_nth_prb != 2 && c.every_nth_prb != 4)
              throw ConfigError("ptrs distributed: every_nth_prb must be 2 or 4");
            if (c.time_density != 1 && c.time_density != 2 && c.time_density != 4)
              throw ConfigError("ptrs distributed: time density must be 1, 2 or 4");
          },
          [&](const OfdmBlock& c) {
            if (c.block_prbs < 1) throw ConfigError("ptrs block: block_prbs must be positive");
            if (kSubcarriersPerPrb * c.block_prbs > alloc)
              throw ConfigError("ptrs block: " + std::to_string(kSubcarriersPerPrb * c.block_prbs) +
                                " subcarriers exceed allocation of " + std::to_string(alloc));
          },
          [&](const DftsGroups& c) {
            if (c.n_groups != 2 && c.n_groups != 4 && c.n_groups != 8)
              throw ConfigError("ptrs groups: n_groups must be 2, 4 or 8");
            if (c.samples_per_group != 2 && c.samples_per_group != 4)
              throw ConfigError("ptrs groups: samples_per_group must be 2 or 4");
          },
          [](const DftsEnhanced&) {},
      },
      cfg);
  if (ptrs_domain(cfg) == PtrsDomain::pre_dft) {
    const int g = groups_of(cfg);
    const int s = per_group_of(cfg);
    if (g * s > alloc || alloc / g < s)
      throw ConfigError("ptrs: " + std::to_string(g) + " groups of " + std::to_string(s) +
                        " samples do not fit in a block of " + std::to_string(alloc));
  }
}

PtrsPattern build_pattern(const PtrsConfig& cfg, int alloc, std::span<const int> data_symbols,
                          std::uint64_t seed) {
  validate(cfg, alloc);
  PtrsPattern pat;
  pat.domain = ptrs_domain(cfg);
  pat.alloc_width = alloc;
  pat.n_groups = groups_of(cfg);
  pat.samples_per_group = per_group_of(cfg);

  const std::vector<int> idx = indices_for(cfg, alloc);
  for (int i : idx)
    if (i < 0 || i >= alloc) throw ConfigError("ptrs: pattern index outside allocation");

  std::mt19937_64 rng(seed);
  const double a = 1.0 / std::sqrt(2.0);
  const int density = time_density(cfg);
  for (std::size_t i = 0; i < data_symbols.size(); ++i) {
    if (static_cast<int>(i) % density != 0) continue;
    PtrsSymbol s;
    s.symbol = data_symbols[i];
    s.indices = idx;
    s.pilots.resize(idx.size());
    for (auto& p : s.pilots) {
      const auto r = rng();
      p = cplx((r & 1) ? -a : a, (r & 2) ? -a : a);
    }
    pat.symbols.push_back(std::move(s));
  }
  return pat;
}

double overhead(const PtrsConfig& cfg, int alloc, int n_data_symbols) {
  if (n_data_symbols < 1) throw ConfigError("ptrs overhead: no data symbols");
  validate(cfg, alloc);
  const int density = time_density(cfg);
  const int ptrs_symbols = (n_data_symbols + density - 1) / density;
  const double per_symbol = static_cast<double>(indices_for(cfg, alloc).size());
  return per_symbol * ptrs_symbols / (static_cast<double>(alloc) * n_data_symbols);
}

std::vector<double> group_centers(const PtrsPattern& pattern, const PtrsSymbol& sym) {
  std::vector<double> c;
  const int s = pattern.samples_per_group;
  if (s <= 0) return c;
  for (std::size_t g = 0; g * s < sym.indices.size(); ++g) {
    double sum = 0.0;
    for (int t = 0; t < s; ++t) sum += sym.indices[g * s + t];
    c.push_back(sum / s);
  }
  return c;
}

}  // namespace mmw
