#include "emi/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emi {

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::multiply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Cholesky::Cholesky(const DenseMatrix& a) : lower_(a.rows(), a.cols()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky: matrix must be square");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
    if (!(d > 0.0)) {
      throw std::domain_error("Cholesky: non-positive pivot " + std::to_string(d) + " at row " +
                              std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      const double* li = &lower_(i, 0);
      const double* lj = &lower_(j, 0);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      lower_(i, j) = s / ljj;
    }
  }
}

void Cholesky::forward_in_place(std::span<double> x) const {
  const std::size_t n = lower_.rows();
  if (x.size() != n) throw std::invalid_argument("Cholesky: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x[k];
    x[i] = s / lower_(i, i);
  }
}

void Cholesky::backward_in_place(std::span<double> x) const {
  const std::size_t n = lower_.rows();
  if (x.size() != n) throw std::invalid_argument("Cholesky: size mismatch");
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
    x[ii] = s / lower_(ii, ii);
  }
}

void Cholesky::solve_in_place(std::span<double> x) const {
  forward_in_place(x);
  backward_in_place(x);
}

}  // namespace emi
