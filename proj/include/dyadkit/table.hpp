#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dyadkit {

using Cell = std::variant<std::int64_t, double, std::string>;

struct TableMetadata {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_time_s = 0.0;
  std::vector<std::pair<std::string, std::string>> extra;
};

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  void add_row(std::vector<Cell> row);
  TableMetadata& metadata() noexcept { return meta_; }
  const TableMetadata& metadata() const noexcept { return meta_; }

  // Header plus data rows: the part that must be identical across reruns.
  std::string data_section() const;
  // Metadata comment lines followed by the data section.
  std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  TableMetadata meta_;
};

// Doubles use 17 significant digits so every value parses back exactly.
std::string format_cell(const Cell& cell);
std::string format_double(double x);

// Writes to_csv(); "-" or an empty path means standard output.  IoError on failure.
void emit(const ResultTable& table, const std::string& path);

}  // namespace dyadkit
