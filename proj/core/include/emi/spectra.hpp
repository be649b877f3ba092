#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "emi/dense.hpp"
#include "emi/sparse.hpp"

namespace emi {

inline constexpr std::size_t kDenseSpectrumCap = 6000;

struct SpectrumReport {
  /// Ascending.
  std::vector<double> eigenvalues;
  std::size_t dimension = 0;
  std::string method;
  /// max ||A v - lambda v|| / ||A|| over the spot-checked pairs.
  double residual = 0.0;
};

struct DenseSpectrumOptions {
  std::size_t cap = kDenseSpectrumCap;
  /// Number of eigenpairs whose residual is verified (smallest, largest and
  /// evenly spread ones in between). 0 disables the check.
  std::size_t spot_checks = 3;
};

/// All eigenvalues by Householder tridiagonalization and implicit QL.
/// Throws std::length_error above the cap and std::invalid_argument on a
/// non-symmetric matrix.
SpectrumReport dense_spectrum(const SparseMatrix& a, const DenseSpectrumOptions& opts = {});
SpectrumReport dense_spectrum(const DenseMatrix& a, const DenseSpectrumOptions& opts = {});

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal d
/// and off-diagonal e (e.size() == d.size() - 1).
std::vector<double> tridiagonal_eigenvalues(std::span<const double> d,
                                            std::span<const double> e);

/// Unit eigenvector of the tridiagonal matrix for an (accurate) eigenvalue,
/// by inverse iteration.
std::vector<double> tridiagonal_eigenvector(std::span<const double> d, std::span<const double> e,
                                            double lambda);

/// Householder reduction Q^T A Q = T of a dense symmetric matrix.
struct Tridiagonalization {
  std::vector<double> diag;
  std::vector<double> offdiag;
  /// Reflector k acts on entries k+1..n-1: H_k = I - beta_k v_k v_k^T.
  DenseMatrix reflectors;
  std::vector<double> beta;

  /// y = Q x
  std::vector<double> apply_q(std::span<const double> x) const;
};

Tridiagonalization tridiagonalize(DenseMatrix a);

using MatrixAction = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosOptions {
  std::size_t max_iterations = 500;
  /// Relative change of the extremal Ritz value between iterations.
  double tol = 1e-8;
  /// Inner CG tolerance for the inverse-driven smallest eigenvalue.
  double inner_tol = 1e-8;
  unsigned seed = 12345;
};

struct ExtremalResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of a symmetric action by Lanczos with full
/// reorthogonalization.
ExtremalResult largest_eigenvalue(const MatrixAction& action, std::size_t dim,
                                  const LanczosOptions& opts = {});

enum class Extremal { kMax, kMinViaInverse };

/// lambda_max by Lanczos on A; lambda_min as 1 / lambda_max(A^{-1}) with
/// A^{-1} applied by CG.
ExtremalResult extremal_eigenvalue(const SparseMatrix& a, Extremal which,
                                   const LanczosOptions& opts = {});

struct EsdDiscrepancy {
  std::vector<std::string> tags;
  /// |mean F(eigs) - mean F(samples)| per test function.
  std::vector<double> mean_difference;
  double sup_sorted = 0.0;
  std::size_t count = 0;
};

/// Both inputs ascending. The longer list is trimmed symmetrically to the
/// length of the shorter one. Test functions: lambda, lambda^2, exp(-lambda).
EsdDiscrepancy esd_discrepancy(std::span<const double> eigs, std::span<const double> samples);

/// Number of eigenvalues with |lambda| > rel_tol * max |lambda|.
std::size_t numerical_rank_symmetric(std::span<const double> eigenvalues,
                                     double rel_tol = 1e-10);

}  // namespace emi
