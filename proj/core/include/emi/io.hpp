#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emi/sparse.hpp"

namespace emi::io {

/// 12 significant digits, shortest of fixed/scientific.
std::string format_number(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Coordinate format, 1-based. Symmetric matrices store the lower triangle
/// under a "symmetric" header, others every entry under "general".
std::string to_matrix_market(const SparseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
SparseMatrix read_matrix_market(const std::filesystem::path& path);
SparseMatrix parse_matrix_market(const std::string& text);

/// Single column with a header row.
std::string to_csv_column(const std::string& header, std::span<const double> values);
void write_csv_column(const std::filesystem::path& path, const std::string& header,
                      std::span<const double> values);
std::vector<double> read_csv_column(const std::filesystem::path& path);

/// Comma-separated table with a header row; cells are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const { write_atomic(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace emi::io
