// Plot-ready data files: CSV with a '#'-prefixed metadata header, and a JSON
// mirror of the same fields. Numbers are written in shortest round-trip form,
// so parse -> re-emit reproduces the file byte for byte, and re-running a
// deterministic scan rewrites identical bytes (no timestamps in the body).

#pragma once

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/detail/numio.hpp"

namespace dicke {

struct DataTable {
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key = value
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
  }
  void add_meta(const std::string& key, double value) {
    meta.emplace_back(key, detail::format_double(value));
  }
  void add_meta(const std::string& key, int value) {
    meta.emplace_back(key, std::to_string(value));
  }
};

inline void write_csv(const DataTable& table, std::ostream& os) {
  for (const auto& [key, value] : table.meta) os << "# " << key << " = " << value << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("write_csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c)
      os << detail::format_double(row[c]) << (c + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

inline DataTable read_csv(std::istream& is) {
  DataTable table;
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw std::runtime_error("read_csv: bad meta line: " + line);
      table.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      header_done = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(detail::parse_double(cell));
    if (row.size() != table.columns.size()) throw std::runtime_error("read_csv: ragged row");
    table.rows.push_back(std::move(row));
  }
  if (!header_done) throw std::runtime_error("read_csv: missing column header");
  return table;
}

inline void write_json(const DataTable& table, std::ostream& os) {
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) j["meta"][key] = value;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  os << j.dump(2) << "\n";
}

inline DataTable read_json(std::istream& is) {
  nlohmann::ordered_json j;
  is >> j;
  DataTable table;
  for (const auto& [key, value] : j.at("meta").items())
    table.meta.emplace_back(key, value.get<std::string>());
  table.columns = j.at("columns").get<std::vector<std::string>>();
  table.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return table;
}

}  // namespace dicke
