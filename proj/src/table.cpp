#include "dyadkit/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "dyadkit/errors.hpp"

namespace dyadkit {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + "\r\n";
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), "table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw InvariantError("table-shape", "row has " + std::to_string(row.size()) +
                                            " cells, table has " +
                                            std::to_string(columns_.size()) + " columns");
  rows_.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return quote(std::get<std::string>(cell));
}

std::string ResultTable::data_section() const {
  std::vector<std::string> header;
  for (const auto& c : columns_) header.push_back(quote(c));
  std::string out = join_row(header);
  for (const auto& row : rows_) {
    std::vector<std::string> fields;
    for (const auto& cell : row) fields.push_back(format_cell(cell));
    out += join_row(fields);
  }
  return out;
}

std::string ResultTable::to_csv() const {
  std::string out;
  out += "# tool_version: " + meta_.tool_version + "\r\n";
  out += "# seed: " + std::to_string(meta_.seed) + "\r\n";
  out += "# config_hash: " + meta_.config_hash + "\r\n";
  for (const auto& [k, v] : meta_.extra) out += "# " + k + ": " + v + "\r\n";
  out += "# wall_time_s: " + format_double(meta_.wall_time_s) + "\r\n";
  return out + data_section();
}

void emit(const ResultTable& table, const std::string& path) {
  const std::string text = table.to_csv();
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("failed to write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace dyadkit
