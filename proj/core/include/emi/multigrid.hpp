#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "emi/assembly.hpp"
#include "emi/dense.hpp"
#include "emi/grid.hpp"
#include "emi/preconditioners.hpp"
#include "emi/sparse.hpp"

namespace emi {

struct MgConfig {
  int pre_smooth = 1;
  int post_smooth = 1;
  double jacobi_omega = 2.0 / 3.0;
  /// Largest admissible size of the densely factored coarsest level.
  std::size_t coarse_threshold = 200;
  /// Coarsening stops at this many elements per side.
  int coarsest_N = 4;

  void validate() const;
};

/// Bilinear interpolation from the coarse to the fine grid, done separately
/// on each subdomain's own nodes. Membrane nodes interpolate from both
/// neighbours along Gamma on their own side, so the e/i pairing is kept.
/// Free fine DOFs take nothing from coarse Dirichlet DOFs.
SparseMatrix prolongation(const DofClassification& fine, const DofClassification& coarse);

struct MgLevel {
  DofClassification dofs;
  SparseMatrix matrix;
  /// Interpolation from level l+1 into this level (empty on the coarsest).
  SparseMatrix prolongation;
  SparseMatrix restriction;
  std::vector<double> inv_diag;
};

class MgHierarchy {
 public:
  MgHierarchy(std::vector<MgLevel> levels, MgConfig cfg);

  std::size_t level_count() const { return levels_.size(); }
  const MgLevel& level(std::size_t l) const { return levels_[l]; }
  const MgConfig& config() const { return cfg_; }
  const Cholesky& coarse_factor() const { return *coarse_; }

  /// One V(pre, post) cycle with zero initial guess: returns an
  /// approximation of A^{-1} r on the finest level.
  std::vector<double> v_cycle(std::span<const double> r) const;
  void v_cycle(std::span<const double> r, std::span<double> x) const;

 private:
  void cycle(std::size_t l, std::span<const double> b, std::span<double> x) const;

  std::vector<MgLevel> levels_;
  MgConfig cfg_;
  std::optional<Cholesky> coarse_;
};

/// Requires N a power of two and N >= 8. Throws std::invalid_argument
/// otherwise and std::length_error if the coarsest level exceeds the
/// configured threshold.
MgHierarchy build_hierarchy(const EmiSystem& sys, const MgConfig& cfg = {});

class MultigridPreconditioner final : public Preconditioner {
 public:
  explicit MultigridPreconditioner(std::shared_ptr<const MgHierarchy> h) : h_(std::move(h)) {}
  void apply(std::span<const double> r, std::span<double> z) const override {
    h_->v_cycle(r, z);
  }
  std::string name() const override { return "mg"; }
  const MgHierarchy& hierarchy() const { return *h_; }

 private:
  std::shared_ptr<const MgHierarchy> h_;
};

}  // namespace emi
