#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ptwell::cli {

/// Column-major numeric table with optional scalar metadata.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> meta;

  void add_row(std::vector<double> row);
};

/// %.17g fields, '\n' line endings. Metadata, if any, goes on one leading
/// "# key=value,..." line ahead of the header.
void write_csv(const Table& t, std::ostream& os);

/// {"meta": {...}, "columns": {"name": [...], ...}} with columns in order.
void write_json(const Table& t, std::ostream& os);

/// {"name": <write_json object>, ...} for several tables in one document.
void write_json_bundle(const std::vector<std::pair<std::string, const Table*>>& tables, std::ostream& os);

/// Shortest "%.17g" rendering used by the CSV writer.
std::string format_number(double v);

}  // namespace ptwell::cli
