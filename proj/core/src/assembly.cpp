#include "emi/assembly.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emi {

namespace {

// Q1 element stiffness on a square, corners counter-clockwise from the
// lower-left. Independent of h in 2D.
constexpr std::array<std::array<double, 4>, 4> kQ1Stiffness{{
    {4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0},
    {-1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0},
    {-2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0},
    {-1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0},
}};

bool element_in_cell(const DofClassification& dofs, int ex, int ey) {
  return ex >= dofs.cell_lo_x() && ex < dofs.cell_hi_x() && ey >= dofs.cell_lo_y() &&
         ey < dofs.cell_hi_y();
}

void require_p1(const DofClassification& dofs) {
  if (dofs.p() != 1) {
    throw std::invalid_argument("assembly: element order p=" + std::to_string(dofs.p()) +
                                " is not supported (only p=1)");
  }
}

// Membrane edges as pairs of positions j, j+1 (mod N_gamma) in the Gamma loop.
template <typename F>
void for_each_membrane_edge(const DofClassification& dofs, F&& f) {
  const std::size_t m = dofs.n_gamma();
  for (std::size_t j = 0; j < m; ++j) f(j, (j + 1) % m);
}

}  // namespace

void EmiParameters::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("EmiParameters: tau must be positive");
  if (!(sigma_e > 0.0) || !(sigma_i > 0.0)) {
    throw std::invalid_argument("EmiParameters: conductivities must be positive");
  }
}

double sine_source(double x, double y) {
  return std::sin(2.0 * std::numbers::pi * x) * std::sin(2.0 * std::numbers::pi * y);
}

SparseMatrix assemble_stiffness(const DofClassification& dofs, Subdomain subdomain,
                                double sigma) {
  require_p1(dofs);
  if (!(sigma > 0.0)) throw std::invalid_argument("assemble_stiffness: sigma must be positive");
  const IndexRange local = dofs.subdomain_range(subdomain);
  const bool want_cell = subdomain == Subdomain::kIntra;
  std::vector<Triplet> triplets;
  const int n = dofs.N();
  for (int ey = 0; ey < n; ++ey) {
    for (int ex = 0; ex < n; ++ex) {
      if (element_in_cell(dofs, ex, ey) != want_cell) continue;
      const std::array<LatticeNode, 4> corners{
          {{ex, ey}, {ex + 1, ey}, {ex + 1, ey + 1}, {ex, ey + 1}}};
      std::array<std::size_t, 4> ids{};
      for (int a = 0; a < 4; ++a) {
        ids[a] = *dofs.dof_at(subdomain, corners[a].ix, corners[a].iy) - local.begin;
      }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) triplets.push_back({ids[a], ids[b], sigma * kQ1Stiffness[a][b]});
    }
  }
  return SparseMatrix::from_triplets(local.size(), local.size(), std::move(triplets), true);
}

MembraneBlocks assemble_membrane(const DofClassification& dofs) {
  require_p1(dofs);
  const std::size_t m = dofs.n_gamma();
  const double h = dofs.h();
  std::vector<Triplet> mass;
  for_each_membrane_edge(dofs, [&](std::size_t a, std::size_t b) {
    mass.push_back({a, a, h / 3.0});
    mass.push_back({b, b, h / 3.0});
    mass.push_back({a, b, h / 6.0});
    mass.push_back({b, a, h / 6.0});
  });
  // Matching interface meshes: the trace bases coincide, so all three blocks
  // share one pattern and one set of values.
  SparseMatrix m_gamma = SparseMatrix::from_triplets(m, m, std::move(mass), true);
  return {m_gamma, m_gamma, m_gamma};
}

std::vector<double> assemble_rhs(const DofClassification& dofs, const SourceFn& source) {
  require_p1(dofs);
  std::vector<double> f(dofs.size(), 0.0);
  const double h = dofs.h();
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> gauss{0.5 - g, 0.5 + g};
  const IndexRange e = dofs.extra_membrane();
  const IndexRange i = dofs.intra_membrane();
  for_each_membrane_edge(dofs, [&](std::size_t a, std::size_t b) {
    const Point pa = dofs.coordinate(e.begin + a);
    const Point pb = dofs.coordinate(e.begin + b);
    for (double s : gauss) {
      const double x = pa.x + s * (pb.x - pa.x);
      const double y = pa.y + s * (pb.y - pa.y);
      const double w = 0.5 * h * source(x, y);
      f[e.begin + a] -= w * (1.0 - s);
      f[e.begin + b] -= w * s;
      f[i.begin + a] += w * (1.0 - s);
      f[i.begin + b] += w * s;
    }
  });
  return f;
}

std::vector<double> unit_rhs(std::size_t n) {
  return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

SparseMatrix membrane_operator(const DofClassification& dofs, const MembraneBlocks& blocks,
                               double scale) {
  const std::size_t n = dofs.size();
  const std::size_t e0 = dofs.extra_membrane().begin;
  const std::size_t i0 = dofs.intra_membrane().begin;
  std::vector<Triplet> t;
  const auto emit = [&](const SparseMatrix& block, std::size_t row0, std::size_t col0,
                        double s) {
    for (std::size_t r = 0; r < block.rows(); ++r) {
      for (std::size_t k = block.row_offsets()[r]; k < block.row_offsets()[r + 1]; ++k) {
        t.push_back({row0 + r, col0 + block.col_indices()[k], s * block.values()[k]});
      }
    }
  };
  emit(blocks.mass_extra, e0, e0, scale);
  emit(blocks.mass_intra, i0, i0, scale);
  emit(blocks.coupling, e0, i0, -scale);
  emit(blocks.coupling.transpose(), i0, e0, -scale);
  return SparseMatrix::from_triplets(n, n, std::move(t), true);
}

namespace {

SparseMatrix embed_stiffness(const DofClassification& dofs, const SparseMatrix& extra,
                             const SparseMatrix& intra, double scale) {
  std::vector<Triplet> t;
  t.reserve(extra.nnz() + intra.nnz());
  const auto emit = [&](const SparseMatrix& block, std::size_t offset) {
    for (std::size_t r = 0; r < block.rows(); ++r) {
      for (std::size_t k = block.row_offsets()[r]; k < block.row_offsets()[r + 1]; ++k) {
        t.push_back({offset + r, offset + block.col_indices()[k], scale * block.values()[k]});
      }
    }
  };
  emit(extra, dofs.subdomain_range(Subdomain::kExtra).begin);
  emit(intra, dofs.subdomain_range(Subdomain::kIntra).begin);
  return SparseMatrix::from_triplets(dofs.size(), dofs.size(), std::move(t), true);
}

// Zero the rows and columns of Dirichlet DOFs, keeping their diagonal entry.
SparseMatrix eliminate_dirichlet(const DofClassification& dofs, const SparseMatrix& a) {
  std::vector<char> fixed(a.rows(), 0);
  for (std::size_t d : dofs.dirichlet_dofs()) fixed[d] = 1;
  std::vector<std::size_t> offsets(a.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz());
  vals.reserve(a.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      const std::size_t j = a.col_indices()[k];
      if ((fixed[i] || fixed[j]) && i != j) continue;
      cols.push_back(j);
      vals.push_back(a.values()[k]);
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols), std::move(vals),
                      true);
}

void check_boundary_treatment(const DofClassification& dofs) {
  for (Subdomain s : {Subdomain::kExtra, Subdomain::kIntra}) {
    const IndexRange r = dofs.subdomain_range(s);
    std::size_t free = 0;
    for (std::size_t d = r.begin; d < r.end; ++d) free += dofs.is_dirichlet(d) ? 0 : 1;
    if (free == 0) {
      throw std::invalid_argument(
          "assemble_system: Dirichlet treatment would eliminate every DOF of a subdomain");
    }
  }
}

}  // namespace

SparseMatrix bulk_operator(const EmiSystem& sys) {
  return eliminate_dirichlet(
      sys.dofs, embed_stiffness(sys.dofs, sys.stiffness_extra, sys.stiffness_intra, 1.0));
}

EmiSystem assemble_system(const DofClassification& dofs, const EmiParameters& params,
                          const SourceFn& source) {
  require_p1(dofs);
  params.validate();
  check_boundary_treatment(dofs);
  EmiSystem sys{dofs,
                params,
                assemble_stiffness(dofs, Subdomain::kExtra, params.sigma_e),
                assemble_stiffness(dofs, Subdomain::kIntra, params.sigma_i),
                assemble_membrane(dofs),
                {},
                {}};
  const SparseMatrix stiffness =
      embed_stiffness(dofs, sys.stiffness_extra, sys.stiffness_intra, params.tau);
  sys.matrix = eliminate_dirichlet(dofs, add(stiffness, membrane_operator(dofs, sys.membrane)));
  sys.rhs = assemble_rhs(dofs, source);
  for (std::size_t d : dofs.dirichlet_dofs()) sys.rhs[d] = 0.0;
  return sys;
}

SplitPair split_bulk_membrane(const EmiSystem& sys) {
  return {bulk_operator(sys), membrane_operator(sys.dofs, sys.membrane, 1.0 / sys.params.tau),
          2 * sys.dofs.n_gamma()};
}

}  // namespace emi
