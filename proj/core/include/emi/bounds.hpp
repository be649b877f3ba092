#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emi/assembly.hpp"
#include "emi/dense.hpp"
#include "emi/sparse.hpp"

namespace emi {

/// Spectrum of A inside [a, b] apart from q eigenvalues above b.
struct LemmaInputs {
  double a = 0.0;
  double b = 0.0;
  std::size_t q = 0;
  double eps = 1e-6;

  void validate() const;
};

/// (sqrt(b) - sqrt(a)) / (sqrt(b) + sqrt(a))
double axelsson_alpha(const LemmaInputs& in);

/// k = q + ceil(ln(2/eps) / ln(1/alpha)); a == b gives k = q + 1.
std::size_t axelsson_bound(const LemmaInputs& in);

struct OutlierReport {
  double tau = 0.0;
  std::size_t n = 0;
  std::size_t n_gamma = 0;
  /// a = lambda_min(tau^{-1} A_n), b = lambda_max(B_n).
  double a = 0.0;
  double b = 0.0;
  std::size_t q = 0;
  std::vector<double> above_b;
  std::size_t k_bound = 0;
  std::size_t observed_iterations = 0;
  bool observed_converged = false;
  /// Condition number of A_n.
  double kappa = 0.0;
  /// Ascending spectrum of tau^{-1} A_n.
  std::vector<double> eigenvalues;
};

/// For each tau: assemble A_n with the grid and conductivities of `base`,
/// compute the dense spectra of tau^{-1} A_n and B_n, and run unpreconditioned
/// CG on tau^{-1} A_n with the normalized all-ones right-hand side.
std::vector<OutlierReport> outlier_report(const EmiSystem& base, std::span<const double> taus,
                                          double eps = 1e-6);
OutlierReport outlier_report(const EmiSystem& sys, double eps = 1e-6);

/// diag(tau A_e^in, I, tau A_i^in, I), with A_e^in carrying the Dirichlet
/// treatment of A_n.
SparseMatrix theoretical_preconditioner(const EmiSystem& sys);

struct ClusterReport {
  std::size_t n = 0;
  std::size_t n_gamma = 0;
  std::vector<double> deltas;
  /// Eigenvalues of P^{-1/2} A P^{-1/2} outside [1 - delta, 1 + delta].
  std::vector<std::size_t> outside;
  std::vector<double> eigenvalues;
};

/// Spectrum of L^{-1} A_n L^{-T} with P_n = L L^T.
ClusterReport cluster_report(const EmiSystem& sys, std::span<const double> deltas = {});

/// Dense symmetric matrix L^{-1} A L^{-T}.
DenseMatrix symmetric_preconditioned(const SparseMatrix& a, const SparseMatrix& p);

/// Counts |lambda| above rel_tol * max |lambda| of a symmetric matrix.
std::size_t numerical_rank(const SparseMatrix& a, double rel_tol = 1e-10);

}  // namespace emi
