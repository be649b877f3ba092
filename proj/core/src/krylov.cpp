#include "emi/krylov.hpp"

#include <chrono>
#include <cmath>

namespace emi {

void SolveConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("SolveConfig: tol must be positive");
  if (maxit < 1) throw std::invalid_argument("SolveConfig: maxit must be at least 1");
}

SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                     const SolveConfig& cfg) {
  cfg.validate();
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("cg_solve: dimension mismatch");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  SolveReport rep;
  rep.config = cfg;
  rep.solution.assign(n, 0.0);
  auto& x = rep.solution;

  const double bnorm = norm2(b);
  const auto finish = [&] {
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (cfg.record_history) rep.history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    return finish();
  }

  std::vector<double> r(b.begin(), b.end()), z(n), p(n), ap(n), true_r(n);
  m.apply(r, z);
  p = z;
  double rz = dot(r, z);
  rep.relative_residual = 1.0;

  for (std::size_t k = 1; k <= cfg.maxit; ++k) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw CgBreakdown(k, "cg_solve: p^T A p = " + std::to_string(pap) + " at iteration " +
                               std::to_string(k) + " (matrix not positive definite)");
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }

    a.multiply(x, true_r);
    for (std::size_t i = 0; i < n; ++i) true_r[i] = b[i] - true_r[i];
    rep.relative_residual = norm2(true_r) / bnorm;
    rep.iterations = k;
    if (cfg.record_history) rep.history.push_back(rep.relative_residual);
    if (rep.relative_residual <= cfg.tol) {
      rep.converged = true;
      return finish();
    }

    m.apply(r, z);
    const double rz_next = dot(r, z);
    if (!(rz_next > 0.0)) {
      throw CgBreakdown(k, "cg_solve: r^T M^{-1} r = " + std::to_string(rz_next) +
                               " at iteration " + std::to_string(k) +
                               " (preconditioner not positive definite)");
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return finish();
}

}  // namespace emi
