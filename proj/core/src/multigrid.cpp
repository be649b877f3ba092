#include "emi/multigrid.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace emi {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct Weight {
  int index;
  double w;
};

// Coarse lattice coordinates contributing to fine coordinate i.
std::array<Weight, 2> coarse_stencil(int i, int& count) {
  if (i % 2 == 0) {
    count = 1;
    return {{{i / 2, 1.0}, {0, 0.0}}};
  }
  count = 2;
  return {{{(i - 1) / 2, 0.5}, {(i + 1) / 2, 0.5}}};
}

}  // namespace

void MgConfig::validate() const {
  if (!(jacobi_omega > 0.0 && jacobi_omega <= 1.0)) {
    throw std::invalid_argument("MgConfig: jacobi_omega must lie in (0, 1]");
  }
  if (pre_smooth < 0 || post_smooth < 0 || pre_smooth + post_smooth < 1) {
    throw std::invalid_argument("MgConfig: need at least one smoothing step");
  }
  if (coarsest_N < 4) throw std::invalid_argument("MgConfig: coarsest_N must be at least 4");
}

SparseMatrix prolongation(const DofClassification& fine, const DofClassification& coarse) {
  if (fine.N() != 2 * coarse.N()) {
    throw std::invalid_argument("prolongation: grids must differ by one bisection");
  }
  std::vector<Triplet> t;
  t.reserve(4 * fine.size());
  for (std::size_t d = 0; d < fine.size(); ++d) {
    const Subdomain s = fine.subdomain(d);
    const LatticeNode node = fine.lattice(d);
    const bool fixed = fine.is_dirichlet(d);
    int nx = 0, ny = 0;
    const auto sx = coarse_stencil(node.ix, nx);
    const auto sy = coarse_stencil(node.iy, ny);
    for (int a = 0; a < nx; ++a) {
      for (int b = 0; b < ny; ++b) {
        const auto c = coarse.dof_at(s, sx[a].index, sy[b].index);
        if (!c) {
          throw std::invalid_argument("prolongation: coarse node (" +
                                      std::to_string(sx[a].index) + ", " +
                                      std::to_string(sy[b].index) +
                                      ") missing from the subdomain; coarsening would break "
                                      "membrane alignment");
        }
        if (!fixed && coarse.is_dirichlet(*c)) continue;
        t.push_back({d, *c, sx[a].w * sy[b].w});
      }
    }
  }
  return SparseMatrix::from_triplets(fine.size(), coarse.size(), std::move(t));
}

MgHierarchy::MgHierarchy(std::vector<MgLevel> levels, MgConfig cfg)
    : levels_(std::move(levels)), cfg_(cfg) {
  if (levels_.empty()) throw std::invalid_argument("MgHierarchy: no levels");
  const SparseMatrix& coarsest = levels_.back().matrix;
  if (coarsest.rows() > cfg_.coarse_threshold) {
    throw std::length_error("MgHierarchy: coarsest level has " +
                            std::to_string(coarsest.rows()) + " DOFs, above the threshold " +
                            std::to_string(cfg_.coarse_threshold));
  }
  coarse_.emplace(coarsest.to_dense());
}

std::vector<double> MgHierarchy::v_cycle(std::span<const double> r) const {
  std::vector<double> x(r.size());
  v_cycle(r, x);
  return x;
}

void MgHierarchy::v_cycle(std::span<const double> r, std::span<double> x) const {
  cycle(0, r, x);
}

void MgHierarchy::cycle(std::size_t l, std::span<const double> b, std::span<double> x) const {
  const MgLevel& lev = levels_[l];
  const std::size_t n = b.size();
  if (l + 1 == levels_.size()) {
    std::copy(b.begin(), b.end(), x.begin());
    coarse_->solve_in_place(x);
    return;
  }
  const double w = cfg_.jacobi_omega;
  std::vector<double> res(n);
  const auto residual = [&] {
    lev.matrix.multiply(x, res);
    for (std::size_t i = 0; i < n; ++i) res[i] = b[i] - res[i];
  };
  const auto smooth = [&](int steps) {
    for (int s = 0; s < steps; ++s) {
      residual();
      for (std::size_t i = 0; i < n; ++i) x[i] += w * lev.inv_diag[i] * res[i];
    }
  };

  std::fill(x.begin(), x.end(), 0.0);
  smooth(cfg_.pre_smooth);
  residual();
  const std::vector<double> rc = lev.restriction.multiply(res);
  std::vector<double> ec(rc.size());
  cycle(l + 1, rc, ec);
  const std::vector<double> corr = lev.prolongation.multiply(ec);
  for (std::size_t i = 0; i < n; ++i) x[i] += corr[i];
  smooth(cfg_.post_smooth);
}

MgHierarchy build_hierarchy(const EmiSystem& sys, const MgConfig& cfg) {
  cfg.validate();
  const int n_fine = sys.dofs.N();
  if (!is_power_of_two(n_fine) || n_fine < 8) {
    throw std::invalid_argument("build_hierarchy: N=" + std::to_string(n_fine) +
                                " must be a power of two and at least 8");
  }
  std::vector<MgLevel> levels;
  levels.push_back({sys.dofs, sys.matrix, {}, {}, {}});
  while (levels.back().dofs.N() > cfg.coarsest_N) {
    MgLevel& fine = levels.back();
    GridSpec spec;
    spec.N = fine.dofs.N() / 2;
    spec.p = fine.dofs.p();
    spec.cell = fine.dofs.cell();
    DofClassification coarse = build_grid(spec);
    fine.prolongation = prolongation(fine.dofs, coarse);
    fine.restriction = fine.prolongation.transpose();
    SparseMatrix a_coarse = galerkin_product(fine.prolongation, fine.matrix);
    levels.push_back({std::move(coarse), std::move(a_coarse), {}, {}, {}});
  }
  for (MgLevel& lev : levels) {
    lev.inv_diag = lev.matrix.diagonal();
    for (std::size_t i = 0; i < lev.inv_diag.size(); ++i) {
      if (!(lev.inv_diag[i] > 0.0)) {
        throw std::domain_error("build_hierarchy: non-positive diagonal on level N=" +
                                std::to_string(lev.dofs.N()));
      }
      lev.inv_diag[i] = 1.0 / lev.inv_diag[i];
    }
  }
  return MgHierarchy(std::move(levels), cfg);
}

}  // namespace emi
