#include "emi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "emi/dense.hpp"

namespace emi {

namespace {

void check_vector(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values,
                           bool symmetric)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)),
      symmetric_(symmetric) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= cols_ ||
          (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])) {
        throw std::invalid_argument("SparseMatrix: column indices must be sorted and in range");
      }
    }
  }
  if (symmetric_) {
    if (rows_ != cols_) throw std::invalid_argument("SparseMatrix: symmetric flag on non-square");
    const double defect = symmetry_defect();
    if (defect > 1e-14) {
      throw std::invalid_argument("SparseMatrix: symmetric flag set but relative asymmetry is " +
                                  std::to_string(defect));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets, bool symmetric) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw std::out_of_range("SparseMatrix::from_triplets: entry (" + std::to_string(t.row) +
                              ", " + std::to_string(t.col) + ") outside " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals_out;
  cols_out.reserve(triplets.size());
  vals_out.reserve(triplets.size());

  std::size_t k = 0;
  while (k < triplets.size()) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
      sum += triplets[k].value;
      ++k;
    }
    if (sum != 0.0) {
      cols_out.push_back(c);
      vals_out.push_back(sum);
      ++offsets[r + 1];
    }
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals_out),
                      symmetric);
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                      std::vector<double>(d.begin(), d.end()), true);
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  check_vector(cols_, x.size(), "SparseMatrix::multiply input");
  check_vector(rows_, y.size(), "SparseMatrix::multiply output");
  const std::size_t* off = row_offsets_.data();
  const std::size_t* col = col_indices_.data();
  const double* val = values_.data();
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseMatrix::at");
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> offsets(cols_ + 1, 0);
  for (std::size_t c : col_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t dst = cursor[col_indices_[k]]++;
      cols[dst] = i;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals),
                      symmetric_);
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  std::vector<double> vals(values_);
  for (double& v : vals) v *= alpha;
  if (alpha == 0.0) return SparseMatrix(rows_, cols_, std::vector<std::size_t>(rows_ + 1, 0),
                                        {}, {}, symmetric_);
  return SparseMatrix(rows_, cols_, row_offsets_, col_indices_, std::move(vals), symmetric_);
}

SparseMatrix SparseMatrix::block(std::size_t row_begin, std::size_t row_end,
                                 std::size_t col_begin, std::size_t col_end) const {
  if (row_begin > row_end || row_end > rows_ || col_begin > col_end || col_end > cols_) {
    throw std::out_of_range("SparseMatrix::block: range outside matrix");
  }
  std::vector<std::size_t> offsets(row_end - row_begin + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t c = col_indices_[k];
      if (c >= col_begin && c < col_end) {
        cols.push_back(c - col_begin);
        vals.push_back(values_[k]);
      }
    }
    offsets[i - row_begin + 1] = cols.size();
  }
  const bool sym = symmetric_ && row_begin == col_begin && row_end == col_end;
  return SparseMatrix(row_end - row_begin, col_end - col_begin, std::move(offsets),
                      std::move(cols), std::move(vals), sym);
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      d(i, col_indices_[k]) = values_[k];
    }
  }
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_indices_[k], i)));
    }
  }
  return worst / scale;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("add: shape mismatch");
  }
  std::vector<std::size_t> offsets(a.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz() + b.nnz());
  vals.reserve(a.nnz() + b.nnz());
  const auto ao = a.row_offsets(), bo = b.row_offsets();
  const auto ac = a.col_indices(), bc = b.col_indices();
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t p = ao[i], q = bo[i];
    while (p < ao[i + 1] || q < bo[i + 1]) {
      std::size_t c;
      double v;
      if (q >= bo[i + 1] || (p < ao[i + 1] && ac[p] < bc[q])) {
        c = ac[p];
        v = alpha * av[p++];
      } else if (p >= ao[i + 1] || bc[q] < ac[p]) {
        c = bc[q];
        v = beta * bv[q++];
      } else {
        c = ac[p];
        v = alpha * av[p++] + beta * bv[q++];
      }
      if (v != 0.0) {
        cols.push_back(c);
        vals.push_back(v);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols), std::move(vals),
                      a.symmetric() && b.symmetric());
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
  const std::size_t n = b.cols();
  std::vector<double> accum(n, 0.0);
  std::vector<std::size_t> marker(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> row_cols;
  std::vector<std::size_t> offsets(a.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  const auto ao = a.row_offsets(), bo = b.row_offsets();
  const auto ac = a.col_indices(), bc = b.col_indices();
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    row_cols.clear();
    for (std::size_t p = ao[i]; p < ao[i + 1]; ++p) {
      const std::size_t k = ac[p];
      for (std::size_t q = bo[k]; q < bo[k + 1]; ++q) {
        const std::size_t j = bc[q];
        if (marker[j] != i) {
          marker[j] = i;
          accum[j] = 0.0;
          row_cols.push_back(j);
        }
        accum[j] += av[p] * bv[q];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (std::size_t j : row_cols) {
      if (accum[j] != 0.0) {
        cols.push_back(j);
        vals.push_back(accum[j]);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(a.rows(), n, std::move(offsets), std::move(cols), std::move(vals), false);
}

SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a) {
  if (a.rows() != p.rows()) throw std::invalid_argument("galerkin_product: shape mismatch");
  const SparseMatrix pt = p.transpose();
  SparseMatrix coarse = multiply(pt, multiply(a, p));
  if (!a.symmetric()) return coarse;
  // Rounding in the triple product leaves O(eps) asymmetry; average it out so
  // the coarse operator is exactly symmetric.
  const SparseMatrix ct = coarse.transpose();
  SparseMatrix sym = add(coarse, ct, 0.5, 0.5);
  return SparseMatrix(sym.rows(), sym.cols(),
                      std::vector<std::size_t>(sym.row_offsets().begin(), sym.row_offsets().end()),
                      std::vector<std::size_t>(sym.col_indices().begin(), sym.col_indices().end()),
                      std::vector<double>(sym.values().begin(), sym.values().end()), true);
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_vector(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace emi
