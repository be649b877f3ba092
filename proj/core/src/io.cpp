#include "emi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emi::io {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string to_matrix_market(const SparseMatrix& a) {
  const bool sym = a.symmetric();
  std::size_t stored = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
      if (!sym || a.col_indices()[k] <= i) ++stored;
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << "\n";
  os << a.rows() << ' ' << a.cols() << ' ' << stored << "\n";
  char buf[64];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      const std::size_t j = a.col_indices()[k];
      if (sym && j > i) continue;
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, j + 1, a.values()[k]);
      os << buf;
    }
  }
  return os.str();
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  write_atomic(path, to_matrix_market(a));
}

SparseMatrix parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("matrix market: missing header");
  }
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real") {
    throw std::runtime_error("matrix market: only real coordinate matrices are supported");
  }
  const bool sym = symmetry == "symmetric";
  if (!sym && symmetry != "general") {
    throw std::runtime_error("matrix market: unsupported symmetry '" + symmetry + "'");
  }
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(std::istringstream(line) >> rows >> cols >> nnz)) {
    throw std::runtime_error("matrix market: bad size line");
  }
  std::vector<Triplet> t;
  t.reserve(sym ? 2 * nnz : nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) {
      throw std::runtime_error("matrix market: bad entry " + std::to_string(e + 1));
    }
    t.push_back({i - 1, j - 1, v});
    if (sym && i != j) t.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(t), sym);
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_matrix_market(ss.str());
}

std::string to_csv_column(const std::string& header, std::span<const double> values) {
  std::string out = header + "\n";
  for (double v : values) out += format_number(v) + "\n";
  return out;
}

void write_csv_column(const std::filesystem::path& path, const std::string& header,
                      std::span<const double> values) {
  write_atomic(path, to_csv_column(header, values));
}

std::vector<double> read_csv_column(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  std::vector<double> out;
  while (std::getline(f, line)) {
    if (!line.empty()) out.push_back(std::stod(line));
  }
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  const auto join = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    return s + "\n";
  };
  std::string out = join(header_);
  for (const auto& r : rows_) out += join(r);
  return out;
}

}  // namespace emi::io
