// SPDX-License-Identifier: Apache-2.0
#include "mmw/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "mmw/types.hpp"

namespace mmw {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("CSV column '" + name + "' not found");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = line.find(',', start);
    out.push_back(line.substr(start, p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw ConfigError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw ConfigError("CSV has no header row");
  return t;
}

void write_csv(std::ostream& out, const CsvTable& t) {
  // No quoting: every field must be representable as-is.
  auto check = [&](const std::vector<std::string>& f) {
    if (f.size() != t.header.size())
      throw ConfigError("CSV row has " + std::to_string(f.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    for (const auto& s : f)
      if (s.find_first_of(",\n\r") != std::string::npos) throw ConfigError("CSV field contains a separator: " + s);
  };
  check(t.header);
  for (const auto& r : t.rows) check(r);
  auto join = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out << ',';
      out << f[i];
    }
    out << '\n';
  };
  for (const auto& c : t.comments) out << "# " << c << '\n';
  join(t.header);
  for (const auto& r : t.rows) join(r);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

}  // namespace mmw
