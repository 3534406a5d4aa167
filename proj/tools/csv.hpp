#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nlfe::cli {

/// Numeric table with `#` metadata lines before the header and optional
/// `#` trailer lines after the rows. Numbers are written in shortest
/// round-trip scientific form, independent of the locale.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_metadata(const std::string& line) { metadata_.push_back(line); }
  void add_trailer(const std::string& line) { trailer_.push_back(line); }
  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(const std::vector<double>& row);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& out) const;
  /// Writes to `path`; throws std::runtime_error if the file cannot be written.
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> metadata_;
  std::vector<std::string> trailer_;
};

}  // namespace nlfe::cli
