#include "csv.hpp"

#include <fstream>
#include <stdexcept>

#include "config.hpp"

namespace nlfe::cli {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("csv table needs at least one column");
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("csv row has " + std::to_string(row.size()) + " values, header has " +
                                std::to_string(columns_.size()));
  rows_.push_back(row);
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& m : metadata_) out << "# " << m << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  for (const auto& t : trailer_) out << "# " << t << '\n';
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write(out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace nlfe::cli
