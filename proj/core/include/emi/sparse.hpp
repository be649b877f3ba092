#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emi {

class DenseMatrix;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and duplicates are merged at construction.
///
/// The `symmetric` flag records that the matrix was built as a symmetric
/// operator; it is checked against the stored values on construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values,
               bool symmetric = false);

  /// Sums duplicate entries. Entries that sum to exactly zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets, bool symmetric = false);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Entry lookup; zero when the position is not stored.
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double alpha) const;
  /// Rows [row_begin, row_end) and columns [col_begin, col_end), reindexed from zero.
  SparseMatrix block(std::size_t row_begin, std::size_t row_end, std::size_t col_begin,
                     std::size_t col_end) const;
  DenseMatrix to_dense() const;

  /// max |a_ij - a_ji| over stored entries, relative to max |a_ij|.
  double symmetry_defect() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// alpha*A + beta*B on matching shapes.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);
/// A*B (Gustavson row-by-row product).
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// P^T A P with the result flagged symmetric when A is.
SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace emi
