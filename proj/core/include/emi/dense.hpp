#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emi {

/// Row-major dense matrix, used for desk-scale spectra and small coarse solves.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense Cholesky factor of an SPD matrix; throws std::domain_error on a
/// non-positive pivot.
class Cholesky {
 public:
  explicit Cholesky(const DenseMatrix& a);

  std::size_t size() const { return lower_.rows(); }
  const DenseMatrix& lower() const { return lower_; }

  void solve_in_place(std::span<double> x) const;
  /// x <- L^{-1} x
  void forward_in_place(std::span<double> x) const;
  /// x <- L^{-T} x
  void backward_in_place(std::span<double> x) const;

 private:
  DenseMatrix lower_;
};

}  // namespace emi
