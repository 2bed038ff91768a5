#include "ptwell_cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <stdexcept>

namespace ptwell::cli {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Table& t, std::ostream& os) {
  if (!t.meta.empty()) {
    os << "# ";
    for (std::size_t i = 0; i < t.meta.size(); ++i) {
      if (i) os << ',';
      os << t.meta[i].first << '=' << format_number(t.meta[i].second);
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) os << ',';
    os << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_number(row[i]);
    }
    os << '\n';
  }
}

namespace {

nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  j["columns"] = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) arr.push_back(row[c]);
    j["columns"][t.columns[c]] = std::move(arr);
  }
  return j;
}

}  // namespace

void write_json(const Table& t, std::ostream& os) { os << to_json(t).dump(2) << '\n'; }

void write_json_bundle(const std::vector<std::pair<std::string, const Table*>>& tables, std::ostream& os) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, t] : tables) j[name] = to_json(*t);
  os << j.dump(2) << '\n';
}

}  // namespace ptwell::cli
