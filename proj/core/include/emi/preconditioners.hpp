#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "emi/sparse.hpp"

namespace emi {

/// z = M^{-1} r for a symmetric positive definite M.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
  virtual std::string name() const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "identity"; }
};

class JacobiPreconditioner final : public Preconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "jacobi"; }

 private:
  std::vector<double> inv_diag_;
};

/// M = (D + wL) D^{-1} (D + wU) / (w (2 - w)), applied by a forward and a
/// backward Gauss-Seidel sweep.
class SsorPreconditioner final : public Preconditioner {
 public:
  SsorPreconditioner(const SparseMatrix& a, double omega = 1.0);
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "ssor"; }
  double omega() const { return omega_; }

 private:
  const SparseMatrix* a_;
  std::vector<double> diag_;
  std::vector<std::size_t> diag_pos_;
  double omega_;
};

/// Incomplete LU with zero fill: L (unit lower) and U share A's pattern.
class Ilu0Preconditioner final : public Preconditioner {
 public:
  explicit Ilu0Preconditioner(const SparseMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "ilu0"; }

  /// Combined factor: strictly lower part holds L, upper part holds U.
  const SparseMatrix& factors() const { return lu_; }

 private:
  SparseMatrix lu_;
  std::vector<std::size_t> diag_pos_;
};

enum class PreconditionerKind { kIdentity, kJacobi, kSsor, kIlu0, kMultigrid };

PreconditionerKind parse_preconditioner(const std::string& tag);
std::string to_string(PreconditionerKind kind);

/// Throws std::invalid_argument naming the first row with a zero diagonal.
void require_nonzero_diagonal(const SparseMatrix& a);

/// Builds identity/jacobi/ssor/ilu0. The returned object may keep a
/// reference to `a`, which must outlive it. Multigrid lives in its own module.
std::unique_ptr<Preconditioner> make_preconditioner(const SparseMatrix& a,
                                                    PreconditionerKind kind,
                                                    double omega = 1.0);

}  // namespace emi
