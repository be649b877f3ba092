#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emi {

enum class Subdomain { kExtra, kIntra };

enum class DofClass { kExtraInterior, kExtraMembrane, kIntraInterior, kIntraMembrane };

struct Point {
  double x;
  double y;
};

struct LatticeNode {
  int ix;
  int iy;
};

/// Axis-aligned cell box inside the unit square, in physical coordinates.
struct CellBox {
  double x0 = 0.25;
  double y0 = 0.25;
  double x1 = 0.75;
  double y1 = 0.75;
};

/// Structured square-in-square discretization: Omega = [0,1]^2 split into
/// N x N square elements of order p, with the cell occupying `cell`.
struct GridSpec {
  int N = 32;
  int p = 1;
  CellBox cell{};

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

/// Degree-of-freedom layout of the EMI system.
///
/// Global ordering is [e_in | e_gamma | i_in | i_gamma]. Interior blocks are
/// lexicographic (y outer, x inner); membrane blocks walk the cell boundary
/// counter-clockwise from its lower-left corner, so the j-th e_gamma and the
/// j-th i_gamma DOF sit on the same node.
class DofClassification {
 public:
  int N() const { return n_elements_; }
  int p() const { return order_; }
  double h() const { return 1.0 / n_elements_; }
  const CellBox& cell() const { return cell_; }

  std::size_t size() const { return lattice_.size(); }
  std::size_t n_gamma() const { return e_gamma_.size(); }
  std::size_t n_extra() const { return e_in_.size() + e_gamma_.size(); }
  std::size_t n_intra() const { return i_in_.size() + i_gamma_.size(); }

  IndexRange range(DofClass c) const;
  IndexRange extra_interior() const { return e_in_; }
  IndexRange extra_membrane() const { return e_gamma_; }
  IndexRange intra_interior() const { return i_in_; }
  IndexRange intra_membrane() const { return i_gamma_; }
  /// Contiguous global range of one subdomain's DOFs (interior then membrane).
  IndexRange subdomain_range(Subdomain s) const;

  DofClass dof_class(std::size_t dof) const;
  Subdomain subdomain(std::size_t dof) const;
  LatticeNode lattice(std::size_t dof) const { return lattice_[dof]; }
  Point coordinate(std::size_t dof) const;
  /// True for extracellular DOFs on the outer boundary (Dirichlet).
  bool is_dirichlet(std::size_t dof) const;
  std::vector<std::size_t> dirichlet_dofs() const;

  /// DOF of subdomain `s` at lattice node (ix, iy), if that node belongs to
  /// the closure of the subdomain.
  std::optional<std::size_t> dof_at(Subdomain s, int ix, int iy) const;

  /// Cell-box bounds in lattice units.
  int cell_lo_x() const { return lo_x_; }
  int cell_lo_y() const { return lo_y_; }
  int cell_hi_x() const { return hi_x_; }
  int cell_hi_y() const { return hi_y_; }

 private:
  friend DofClassification build_grid(const GridSpec& spec);

  int n_elements_ = 0;
  int order_ = 1;
  CellBox cell_{};
  int lo_x_ = 0, lo_y_ = 0, hi_x_ = 0, hi_y_ = 0;
  IndexRange e_in_, e_gamma_, i_in_, i_gamma_;
  std::vector<LatticeNode> lattice_;
  std::vector<std::int64_t> extra_lookup_;
  std::vector<std::int64_t> intra_lookup_;
};

DofClassification build_grid(const GridSpec& spec);

struct GammaPair {
  std::size_t extra;
  std::size_t intra;
};

/// One pair per membrane node: (e_gamma DOF, i_gamma DOF) at the same point.
std::vector<GammaPair> gamma_pairing(const DofClassification& dofs);

/// n = (Np+1)^2 + 2Np for the default cell.
std::size_t expected_dof_count(int N, int p = 1);

std::string to_string(DofClass c);

}  // namespace emi
