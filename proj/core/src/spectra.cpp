#include "emi/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "emi/krylov.hpp"
#include "emi/symbols.hpp"

namespace emi {

namespace {

// Implicit QL on (d, e) where e[i] couples i and i+1 and e[n-1] is scratch.
void tql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw std::runtime_error("tridiagonal QL: no convergence");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

double dense_symmetry_defect(const DenseMatrix& a) {
  double defect = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      defect = std::max(defect, std::abs(a(i, j) - a(j, i)));
      scale = std::max(scale, std::abs(a(i, j)));
    }
  }
  return scale == 0.0 ? 0.0 : defect / scale;
}

std::vector<std::size_t> spot_indices(std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx;
  if (count == 0 || n == 0) return idx;
  if (count == 1) return {n - 1};
  for (std::size_t c = 0; c < count; ++c) idx.push_back(c * (n - 1) / (count - 1));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

SpectrumReport finish_spectrum(const Tridiagonalization& t, const MatrixAction& action,
                               const DenseSpectrumOptions& opts) {
  SpectrumReport rep;
  rep.dimension = t.diag.size();
  rep.method = "dense";
  rep.eigenvalues = tridiagonal_eigenvalues(t.diag, t.offdiag);
  const double norm =
      rep.eigenvalues.empty()
          ? 0.0
          : std::max(std::abs(rep.eigenvalues.front()), std::abs(rep.eigenvalues.back()));
  std::vector<double> av(rep.dimension);
  for (std::size_t j : spot_indices(rep.dimension, opts.spot_checks)) {
    const double lambda = rep.eigenvalues[j];
    const auto y = t.apply_q(tridiagonal_eigenvector(t.diag, t.offdiag, lambda));
    action(y, av);
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) res += std::pow(av[i] - lambda * y[i], 2);
    rep.residual = std::max(rep.residual, norm == 0.0 ? std::sqrt(res) : std::sqrt(res) / norm);
  }
  return rep;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw std::length_error("dense_spectrum: dimension " + std::to_string(n) +
                            " exceeds the dense cap " + std::to_string(cap));
  }
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::span<const double> d,
                                            std::span<const double> e) {
  if (d.empty()) return {};
  if (e.size() + 1 != d.size()) {
    throw std::invalid_argument("tridiagonal_eigenvalues: off-diagonal length must be n-1");
  }
  std::vector<double> dd(d.begin(), d.end());
  std::vector<double> ee(e.begin(), e.end());
  ee.push_back(0.0);
  tql(dd, ee);
  std::sort(dd.begin(), dd.end());
  return dd;
}

std::vector<double> tridiagonal_eigenvector(std::span<const double> d, std::span<const double> e,
                                            double lambda) {
  const std::size_t n = d.size();
  if (n == 1) return {1.0};
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tnorm = std::max(tnorm, std::abs(d[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0) +
                                (i + 1 < n ? std::abs(e[i]) : 0.0));
  }
  const double tiny = std::max(tnorm, 1.0) * std::numeric_limits<double>::epsilon();
  const double sigma = lambda + tiny;

  // LU with partial pivoting of T - sigma I.
  std::vector<double> dl(e.begin(), e.end()), du(e.begin(), e.end()), dg(n), du2(n, 0.0);
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) dg[i] = d[i] - sigma;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dg[i]) >= std::abs(dl[i])) {
      piv[i] = i;
      if (dg[i] == 0.0) dg[i] = tiny;
      const double f = dl[i] / dg[i];
      dl[i] = f;
      dg[i + 1] -= f * du[i];
    } else {
      piv[i] = i + 1;
      const double f = dg[i] / dl[i];
      dg[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = dg[i + 1];
      dg[i + 1] = tmp - f * dg[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
    }
  }
  if (dg[n - 1] == 0.0) dg[n - 1] = tiny;

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  for (int it = 0; it < 3; ++it) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t ip = piv[i];
      const double tmp = x[2 * i + 1 - ip] - dl[i] * x[ip];
      x[i] = x[ip];
      x[i + 1] = tmp;
    }
    x[n - 1] /= dg[n - 1];
    x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dg[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dg[i];
    }
    const double nrm = norm2(x);
    for (double& v : x) v /= nrm;
  }
  return x;
}

std::vector<double> Tridiagonalization::apply_q(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  const std::size_t n = y.size();
  for (std::size_t k = beta.size(); k-- > 0;) {
    if (beta[k] == 0.0) continue;
    const auto v = reflectors.row(k);
    double s = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) s += v[i] * y[i];
    s *= beta[k];
    for (std::size_t i = k + 1; i < n; ++i) y[i] -= s * v[i];
  }
  return y;
}

Tridiagonalization tridiagonalize(DenseMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("tridiagonalize: matrix must be square");
  Tridiagonalization t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  t.beta.assign(n > 2 ? n - 2 : 0, 0.0);
  std::vector<double> v(n), p(n), w(n);
  // Only the lower triangle is read and updated; once column k is reduced,
  // row k's upper part stores the reflector v_k.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m0 = k + 1;
    double xnorm = 0.0;
    for (std::size_t i = m0; i < n; ++i) {
      v[i] = a(i, k);
      xnorm += v[i] * v[i];
    }
    xnorm = std::sqrt(xnorm);
    t.diag[k] = a(k, k);
    double tail = 0.0;
    for (std::size_t i = m0 + 1; i < n; ++i) tail = std::max(tail, std::abs(v[i]));
    if (tail == 0.0) {
      t.offdiag[k] = v[m0];
      continue;
    }
    const double alpha = -std::copysign(xnorm, v[m0]);
    v[m0] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = m0; i < n; ++i) vtv += v[i] * v[i];
    const double beta = 2.0 / vtv;
    t.offdiag[k] = alpha;
    t.beta[k] = beta;

    // p = beta * S v with S the trailing block, lower triangle only.
    std::fill(p.begin() + static_cast<std::ptrdiff_t>(m0), p.end(), 0.0);
    for (std::size_t i = m0; i < n; ++i) {
      const double* row = a.row(i).data();
      const double vi = v[i];
      double acc = 0.0;
      for (std::size_t j = m0; j < i; ++j) {
        acc += row[j] * v[j];
        p[j] += row[j] * vi;
      }
      p[i] += acc + row[i] * vi;
    }
    double pv = 0.0;
    for (std::size_t i = m0; i < n; ++i) {
      p[i] *= beta;
      pv += p[i] * v[i];
    }
    const double kk = 0.5 * beta * pv;
    for (std::size_t i = m0; i < n; ++i) w[i] = p[i] - kk * v[i];
    for (std::size_t i = m0; i < n; ++i) {
      double* row = a.row(i).data();
      const double vi = v[i], wi = w[i];
      for (std::size_t j = m0; j <= i; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
    double* store = a.row(k).data();
    for (std::size_t i = m0; i < n; ++i) store[i] = v[i];
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.offdiag[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag[n - 1] = a(n - 1, n - 1);
  t.reflectors = std::move(a);
  return t;
}

SpectrumReport dense_spectrum(const SparseMatrix& a, const DenseSpectrumOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense_spectrum: matrix must be square");
  check_cap(a.rows(), opts.cap);
  if (a.symmetry_defect() > 1e-12) {
    throw std::invalid_argument("dense_spectrum: matrix is not symmetric");
  }
  const Tridiagonalization t = tridiagonalize(a.to_dense());
  return finish_spectrum(
      t, [&](std::span<const double> x, std::span<double> y) { a.multiply(x, y); }, opts);
}

SpectrumReport dense_spectrum(const DenseMatrix& a, const DenseSpectrumOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense_spectrum: matrix must be square");
  check_cap(a.rows(), opts.cap);
  if (dense_symmetry_defect(a) > 1e-12) {
    throw std::invalid_argument("dense_spectrum: matrix is not symmetric");
  }
  const Tridiagonalization t = tridiagonalize(a);
  return finish_spectrum(
      t,
      [&](std::span<const double> x, std::span<double> y) {
        const auto r = a.multiply(x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      opts);
}

ExtremalResult largest_eigenvalue(const MatrixAction& action, std::size_t dim,
                                  const LanczosOptions& opts) {
  if (dim == 0) throw std::invalid_argument("largest_eigenvalue: empty operator");
  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> basis;
  std::vector<double> v(dim), w(dim), alphas, betas;
  for (double& x : v) x = normal(rng);
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  ExtremalResult res;
  double previous = 0.0;
  const std::size_t cap = std::min(opts.max_iterations, dim);
  for (std::size_t j = 0; j < cap; ++j) {
    basis.push_back(v);
    action(v, w);
    const double alpha = dot(w, v);
    alphas.push_back(alpha);
    // Full reorthogonalization, two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double c = dot(w, q);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
      }
    }
    const double beta = norm2(w);
    const double theta = tridiagonal_eigenvalues(alphas, betas).back();
    res.value = theta;
    res.iterations = j + 1;
    const double scale = std::max(std::abs(theta), std::numeric_limits<double>::min());
    if (j > 0 && std::abs(theta - previous) <= opts.tol * scale) {
      res.converged = true;
      return res;
    }
    if (beta <= 1e-14 * std::max(std::abs(alpha), 1.0) || j + 1 == dim) {
      res.converged = true;  // invariant subspace: Ritz values are exact
      return res;
    }
    previous = theta;
    betas.push_back(beta);
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / beta;
  }
  return res;
}

ExtremalResult extremal_eigenvalue(const SparseMatrix& a, Extremal which,
                                   const LanczosOptions& opts) {
  if (which == Extremal::kMax) {
    return largest_eigenvalue(
        [&](std::span<const double> x, std::span<double> y) { a.multiply(x, y); }, a.rows(),
        opts);
  }
  const IdentityPreconditioner id;
  SolveConfig inner;
  inner.tol = opts.inner_tol;
  inner.maxit = 100000;
  inner.record_history = false;
  ExtremalResult r = largest_eigenvalue(
      [&](std::span<const double> x, std::span<double> y) {
        const SolveReport s = cg_solve(a, x, id, inner);
        if (!s.converged) throw std::runtime_error("extremal_eigenvalue: inner CG did not converge");
        std::copy(s.solution.begin(), s.solution.end(), y.begin());
      },
      a.rows(), opts);
  r.value = 1.0 / r.value;
  return r;
}

EsdDiscrepancy esd_discrepancy(std::span<const double> eigs, std::span<const double> samples) {
  if (eigs.empty() || samples.empty()) {
    throw std::invalid_argument("esd_discrepancy: both lists must be nonempty");
  }
  const std::size_t count = std::min(eigs.size(), samples.size());
  const auto x = trim_symmetric(eigs, count);
  const auto y = trim_symmetric(samples, count);
  EsdDiscrepancy out;
  out.count = count;
  out.tags = {"lambda", "lambda^2", "exp(-lambda)"};
  const auto mean_of = [count](const std::vector<double>& v, auto f) {
    double s = 0.0;
    for (double t : v) s += f(t);
    return s / static_cast<double>(count);
  };
  const auto id = [](double t) { return t; };
  const auto sq = [](double t) { return t * t; };
  const auto ex = [](double t) { return std::exp(-t); };
  out.mean_difference = {std::abs(mean_of(x, id) - mean_of(y, id)),
                         std::abs(mean_of(x, sq) - mean_of(y, sq)),
                         std::abs(mean_of(x, ex) - mean_of(y, ex))};
  for (std::size_t i = 0; i < count; ++i) {
    out.sup_sorted = std::max(out.sup_sorted, std::abs(x[i] - y[i]));
  }
  return out;
}

std::size_t numerical_rank_symmetric(std::span<const double> eigenvalues, double rel_tol) {
  double mx = 0.0;
  for (double l : eigenvalues) mx = std::max(mx, std::abs(l));
  if (mx == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [&](double l) { return std::abs(l) > rel_tol * mx; }));
}

}  // namespace emi
