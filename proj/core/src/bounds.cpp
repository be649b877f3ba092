#include "emi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emi/krylov.hpp"
#include "emi/spectra.hpp"

namespace emi {

void LemmaInputs::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("LemmaInputs: a must be positive");
  if (!(b >= a)) throw std::invalid_argument("LemmaInputs: b must be at least a");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("LemmaInputs: eps must lie in (0,1)");
}

double axelsson_alpha(const LemmaInputs& in) {
  in.validate();
  const double sa = std::sqrt(in.a), sb = std::sqrt(in.b);
  return (sb - sa) / (sb + sa);
}

std::size_t axelsson_bound(const LemmaInputs& in) {
  const double alpha = axelsson_alpha(in);
  if (alpha == 0.0) return in.q + 1;
  const double steps = std::ceil(std::log(2.0 / in.eps) / std::log(1.0 / alpha));
  return in.q + static_cast<std::size_t>(steps);
}

OutlierReport outlier_report(const EmiSystem& sys, double eps) {
  const double tau = sys.params.tau;
  OutlierReport rep;
  rep.tau = tau;
  rep.n = sys.size();
  rep.n_gamma = sys.dofs.n_gamma();

  const SparseMatrix scaled = sys.matrix.scaled(1.0 / tau);
  const SpectrumReport spec_a = dense_spectrum(scaled);
  const SpectrumReport spec_b = dense_spectrum(bulk_operator(sys));
  rep.eigenvalues = spec_a.eigenvalues;
  rep.a = spec_a.eigenvalues.front();
  rep.b = spec_b.eigenvalues.back();
  rep.kappa = spec_a.eigenvalues.back() / spec_a.eigenvalues.front();
  // Relative guard so eigenvalues equal to b up to rounding are not outliers.
  const double cut = rep.b * (1.0 + 1e-10);
  for (double l : spec_a.eigenvalues)
    if (l > cut) rep.above_b.push_back(l);
  rep.q = rep.above_b.size();
  rep.k_bound = axelsson_bound({rep.a, rep.b, rep.q, eps});

  SolveConfig cfg;
  cfg.tol = eps;
  cfg.record_history = false;
  const SolveReport cg = cg_solve(scaled, unit_rhs(rep.n), IdentityPreconditioner{}, cfg);
  rep.observed_iterations = cg.iterations;
  rep.observed_converged = cg.converged;
  return rep;
}

std::vector<OutlierReport> outlier_report(const EmiSystem& base, std::span<const double> taus,
                                          double eps) {
  std::vector<OutlierReport> out;
  for (double tau : taus) {
    EmiParameters p = base.params;
    p.tau = tau;
    out.push_back(outlier_report(assemble_system(base.dofs, p), eps));
  }
  return out;
}

SparseMatrix theoretical_preconditioner(const EmiSystem& sys) {
  const DofClassification& d = sys.dofs;
  std::vector<Triplet> t;
  const auto copy_block = [&](IndexRange r) {
    const SparseMatrix blk = sys.matrix.block(r.begin, r.end, r.begin, r.end);
    for (std::size_t i = 0; i < blk.rows(); ++i) {
      for (std::size_t k = blk.row_offsets()[i]; k < blk.row_offsets()[i + 1]; ++k) {
        t.push_back({r.begin + i, r.begin + blk.col_indices()[k], blk.values()[k]});
      }
    }
  };
  const auto identity_block = [&](IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) t.push_back({i, i, 1.0});
  };
  copy_block(d.extra_interior());
  identity_block(d.extra_membrane());
  copy_block(d.intra_interior());
  identity_block(d.intra_membrane());
  return SparseMatrix::from_triplets(d.size(), d.size(), std::move(t), true);
}

DenseMatrix symmetric_preconditioned(const SparseMatrix& a, const SparseMatrix& p) {
  const std::size_t n = a.rows();
  const Cholesky chol(p.to_dense());
  DenseMatrix m = a.to_dense();
  // Columns: m <- L^{-1} m, then rows: m <- m L^{-T}.
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = m(i, j);
    chol.forward_in_place(col);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i) chol.forward_in_place(m.row(i));
  // Remove rounding asymmetry.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = s;
    }
  }
  return m;
}

ClusterReport cluster_report(const EmiSystem& sys, std::span<const double> deltas) {
  ClusterReport rep;
  rep.n = sys.size();
  rep.n_gamma = sys.dofs.n_gamma();
  rep.deltas = deltas.empty() ? std::vector<double>{0.1, 0.01}
                              : std::vector<double>(deltas.begin(), deltas.end());
  const SparseMatrix p = theoretical_preconditioner(sys);
  SpectrumReport spec;
  try {
    spec = dense_spectrum(symmetric_preconditioned(sys.matrix, p));
  } catch (const std::domain_error&) {
    throw std::domain_error("cluster_report: P_n has a singular diagonal block");
  }
  rep.eigenvalues = spec.eigenvalues;
  for (double delta : rep.deltas) {
    rep.outside.push_back(static_cast<std::size_t>(
        std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                      [&](double l) { return std::abs(l - 1.0) > delta; })));
  }
  return rep;
}

std::size_t numerical_rank(const SparseMatrix& a, double rel_tol) {
  DenseSpectrumOptions opts;
  opts.spot_checks = 0;
  return numerical_rank_symmetric(dense_spectrum(a, opts).eigenvalues, rel_tol);
}

}  // namespace emi
