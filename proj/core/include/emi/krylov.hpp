#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "emi/preconditioners.hpp"
#include "emi/sparse.hpp"

namespace emi {

struct SolveConfig {
  /// Relative tolerance on the unpreconditioned residual ||b - A x|| / ||b||.
  double tol = 1e-6;
  std::size_t maxit = 10000;
  std::string precond = "identity";
  bool record_history = true;

  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  /// Relative true residual after each iteration, starting with iteration 0.
  std::vector<double> history;
  double seconds = 0.0;
  bool converged = false;
  std::vector<double> solution;
  SolveConfig config;
};

/// p^T A p <= 0 (or p^T M^{-1} ... <= 0) met during the iteration.
class CgBreakdown : public std::runtime_error {
 public:
  CgBreakdown(std::size_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Preconditioned CG from a zero initial guess. Stops at the first k with
/// ||b - A x_k|| / ||b|| <= tol, the residual being recomputed from x_k.
SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                     const SolveConfig& cfg = {});

}  // namespace emi
