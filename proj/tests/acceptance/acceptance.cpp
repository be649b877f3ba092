// Acceptance suite: one PASS/FAIL line per criterion. Run with a criterion
// name to check only that one; with no argument every criterion runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "emi/assembly.hpp"
#include "emi/bounds.hpp"
#include "emi/krylov.hpp"
#include "emi/preconditioners.hpp"
#include "emi/spectra.hpp"
#include "emi/symbols.hpp"
#include "runner.hpp"

using namespace emi;
using emi::tools::CaseParams;
using emi::tools::RhsKind;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<emi::tools::CaseResult> run_cells(const std::vector<int>& ns,
                                              const std::vector<double>& taus,
                                              const std::string& precond, RhsKind rhs) {
  std::vector<CaseParams> cells;
  for (double tau : taus) {
    for (int N : ns) {
      CaseParams c;
      c.N = N;
      c.tau = tau;
      c.precond = precond;
      c.rhs = rhs;
      cells.push_back(c);
    }
  }
  return emi::tools::run_grid(cells, 1);
}

bool all_converged(const std::vector<emi::tools::CaseResult>& rs, std::ostringstream& os) {
  bool ok = true;
  for (const auto& r : rs) {
    if (r.error || !r.report.converged) {
      ok = false;
      os << " [N=" << r.params.N << " tau=" << r.params.tau << " failed"
         << (r.error ? ": " + *r.error : std::string()) << "]";
    }
  }
  return ok;
}

// Unpreconditioned CG counts for the 12 (N, tau) cells against the reference
// table, tau-major. The band applies to every cell.
Outcome cg_iteration_counts() {
  const std::vector<int> ns{32, 64, 128};
  const std::vector<double> taus{1.0, 1e-1, 1e-2, 1e-3};
  const std::vector<double> reference{49, 95, 186, 45, 90, 176, 41, 79, 151, 71, 122, 185};
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream os;
  bool any = false;
  for (RhsKind rhs : {RhsKind::kSine, RhsKind::kUnit}) {
    const auto rs = run_cells(ns, taus, "identity", rhs);
    bool ok = all_converged(rs, os);
    std::size_t inside = 0;
    os << " " << emi::tools::to_string(rhs) << "=";
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double it = static_cast<double>(rs[i].report.iterations);
      const bool in = std::abs(it - reference[i]) <= 0.10 * reference[i];
      inside += in;
      ok = ok && in;
      os << (i ? "/" : "") << rs[i].report.iterations << (in ? "" : "*");
    }
    os << " (" << inside << "/12 within 10%)";
    any = any || ok;
  }
  const double s = seconds_since(t0);
  os << " time=" << std::lround(s) << "s";
  return {any && s < 120.0, os.str()};
}

Outcome tau_robustness() {
  const std::vector<double> taus{1.0, 1e-1, 1e-2, 1e-3};
  const auto rs = run_cells({32}, taus, "identity", RhsKind::kSine);
  std::ostringstream os;
  bool ok = all_converged(rs, os);
  std::size_t lo = SIZE_MAX, hi = 0;
  os << " iterations=";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    lo = std::min(lo, rs[i].report.iterations);
    hi = std::max(hi, rs[i].report.iterations);
    os << (i ? "/" : "") << rs[i].report.iterations;
  }
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  const auto kappa = [](double tau) {
    const auto s = dense_spectrum(assemble_system(build_grid({32}), {tau}).matrix);
    return s.eigenvalues.back() / s.eigenvalues.front();
  };
  const double k1 = kappa(1.0), k3 = kappa(1e-3);
  os << " ratio=" << ratio << " kappa(1)=" << k1 << " kappa(1e-3)=" << k3
     << " growth=" << k3 / k1;
  ok = ok && ratio <= 2.0 && k3 / k1 >= 10.0;
  return {ok, os.str()};
}

Outcome cg_bound_outliers() {
  const auto base = assemble_system(build_grid({16}), {1.0});
  const std::vector<double> taus{1.0, 1e-1, 1e-2, 1e-3};
  const auto rs = outlier_report(base, taus, 1e-6);
  std::ostringstream os;
  bool ok = true;
  const std::size_t cap = 2 * base.dofs.n_gamma();
  for (const auto& r : rs) {
    const bool bound_ok = r.observed_converged && r.observed_iterations <= r.k_bound;
    const bool q_ok = r.q <= cap && (r.tau != 1e-3 || r.q == cap);
    ok = ok && bound_ok && q_ok;
    os << " [tau=" << r.tau << " a=" << r.a << " b=" << r.b << " q=" << r.q << " k=" << r.k_bound
       << " obs=" << r.observed_iterations << (bound_ok ? "" : " bound-violated")
       << (q_ok ? "" : " q-mismatch") << "]";
  }
  os << " 2N_gamma=" << cap;
  return {ok, os.str()};
}

// Singular values of a symmetric matrix are the absolute eigenvalues.
std::size_t rank_above(const SparseMatrix& a, double threshold) {
  const auto ev = dense_spectrum(a).eigenvalues;
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](double l) { return std::abs(l) > threshold; }));
}

Outcome outlier_rank() {
  std::ostringstream os;
  bool ok = true;
  for (int N : {4, 8}) {
    for (double tau : {1.0, 1e-2}) {
      const auto sys = assemble_system(build_grid({N}), {tau});
      const std::size_t ng = sys.dofs.n_gamma();
      const std::size_t r_rank = rank_above(split_bulk_membrane(sys).membrane, 1e-10);
      const std::size_t d_rank =
          rank_above(add(sys.matrix, theoretical_preconditioner(sys), 1.0, -1.0), 1e-10);
      ok = ok && r_rank <= 2 * ng && d_rank <= 4 * ng;
      os << " [N=" << N << " tau=" << tau << " rank(R)=" << r_rank << "/" << 2 * ng
         << " rank(A-P)=" << d_rank << "/" << 4 * ng << "]";
    }
  }
  return {ok, os.str()};
}

double esd_mean_gap(int N) {
  const auto sys = assemble_system(build_grid({N}), {1.0});
  const auto spec = dense_spectrum(sys.matrix);
  const CompositeSymbol g{0.25, SymbolFn::q1_laplacian(), SymbolFn::q1_laplacian()};
  const auto grid = matched_composite_grid(sys.size());
  const auto samples = sample_rearranged(g, grid.m_x, grid.m_theta);
  return esd_discrepancy(spec.eigenvalues, samples).mean_difference[0];
}

Outcome symbol_distribution() {
  const auto t0 = std::chrono::steady_clock::now();
  const double d32 = esd_mean_gap(32);
  const double d64 = esd_mean_gap(64);
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << " mean_gap(N=32)=" << d32 << " mean_gap(N=64)=" << d64 << " time=" << std::lround(s)
     << "s";
  return {d64 <= 0.05 && d64 <= d32 && s < 300.0, os.str()};
}

// Compares assembled rows whose 3x3 stencil stays inside one subdomain
// interior, away from the boundary and membrane, with T_n(f^square).
Outcome stiffness_symbol_identity() {
  const int N = 32;
  const auto sys = assemble_system(build_grid({N}), {1.0});
  const auto& d = sys.dofs;
  const std::size_t m = static_cast<std::size_t>(N - 1);
  const auto t = build_toeplitz(SymbolFn::q1_laplacian(), {m, m});
  const auto toeplitz_index = [m](int ix, int iy) {
    return static_cast<std::size_t>(iy - 1) * m + static_cast<std::size_t>(ix - 1);
  };
  std::size_t rows = 0, mismatches = 0;
  for (Subdomain s : {Subdomain::kExtra, Subdomain::kIntra}) {
    const auto& k = s == Subdomain::kExtra ? sys.stiffness_extra : sys.stiffness_intra;
    const IndexRange range = d.subdomain_range(s);
    for (std::size_t dof = range.begin; dof < range.end; ++dof) {
      const LatticeNode c = d.lattice(dof);
      bool inner = true;
      for (int a = -1; a <= 1 && inner; ++a)
        for (int b = -1; b <= 1 && inner; ++b) {
          const auto nb = d.dof_at(s, c.ix + a, c.iy + b);
          inner = nb && !d.is_dirichlet(*nb) &&
                  d.dof_class(*nb) != DofClass::kExtraMembrane &&
                  d.dof_class(*nb) != DofClass::kIntraMembrane;
        }
      if (!inner) continue;
      ++rows;
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          const std::size_t nb = *d.dof_at(s, c.ix + a, c.iy + b);
          const double assembled = k.at(dof - range.begin, nb - range.begin);
          const double symbol = t.at(toeplitz_index(c.ix, c.iy), toeplitz_index(c.ix + a, c.iy + b));
          mismatches += assembled != symbol;
        }
    }
  }
  const auto small = build_toeplitz(SymbolFn::q1_laplacian(), {15, 15});
  const auto ev = dense_spectrum(small).eigenvalues;
  double mean = 0.0;
  for (double l : ev) mean += l;
  mean /= static_cast<double>(ev.size());
  std::ostringstream os;
  os << " interior_rows=" << rows << " mismatched_entries=" << mismatches
     << " mean_eig=" << std::abs(mean - 8.0 / 3.0) << " from 8/3";
  return {rows > 0 && mismatches == 0 && std::abs(mean - 8.0 / 3.0) <= 1e-12, os.str()};
}

Outcome multigrid_robustness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rs = run_cells({32, 64, 128, 256}, {1.0, 1e-1, 1e-2, 1e-3}, "mg", RhsKind::kSine);
  std::ostringstream os;
  bool ok = all_converged(rs, os);
  std::size_t lo = SIZE_MAX, hi = 0;
  os << " iterations=";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    lo = std::min(lo, rs[i].report.iterations);
    hi = std::max(hi, rs[i].report.iterations);
    os << (i ? "/" : "") << rs[i].report.iterations;
  }
  const double s = seconds_since(t0);
  const double ratio = static_cast<double>(hi) / static_cast<double>(std::max<std::size_t>(lo, 1));
  os << " max=" << hi << " ratio=" << ratio << " time=" << std::lround(s) << "s";
  return {ok && hi <= 12 && ratio <= 2.0 && s < 600.0, os.str()};
}

Outcome preconditioner_ordering() {
  std::map<std::string, std::size_t> it;
  std::ostringstream os;
  bool ok = true;
  for (const char* p : {"mg", "ilu0", "ssor", "jacobi", "identity"}) {
    const auto rs = run_cells({512}, {1e-2}, p, RhsKind::kSine);
    ok = all_converged(rs, os) && ok;
    it[p] = rs.front().report.iterations;
    os << " " << p << "=" << it[p];
  }
  const bool order = it["mg"] < it["ilu0"] && it["ilu0"] < it["ssor"] &&
                     it["ssor"] < it["jacobi"] && it["jacobi"] <= it["identity"];
  const bool ilu = std::abs(static_cast<double>(it["ilu0"]) - 120.0) <= 0.15 * 120.0;
  os << " ordering=" << (order ? "ok" : "violated") << " ilu_vs_120=" << (ilu ? "ok" : "outside 15%");
  return {ok && order && ilu, os.str()};
}

Outcome oracle_equivalences() {
  std::ostringstream os;
  bool ok = true;
  for (std::size_t n : {9u, 99u}) {
    const auto ev = dense_spectrum(build_toeplitz(SymbolFn::stiffness_1d(), {n})).eigenvalues;
    double err = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double exact =
          2.0 - 2.0 * std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n + 1));
      err = std::max(err, std::abs(ev[j - 1] - exact));
    }
    ok = ok && err <= 1e-12;
    os << " closed_form_err(n=" << n << ")=" << err;
  }
  const auto tri = build_toeplitz(SymbolFn::stiffness_1d(), {64});
  const Ilu0Preconditioner ilu(tri);
  SolveConfig cfg;
  cfg.tol = 1e-10;
  const auto r = cg_solve(tri, unit_rhs(64), ilu, cfg);
  ok = ok && r.converged && r.iterations == 1;
  os << " ilu_tridiagonal_iterations=" << r.iterations;
  for (std::size_t k : {2u, 3u, 4u}) {
    const std::size_t blocks = 6;
    const auto back = assemble_block_toeplitz(reblock_symbol(SymbolFn::stiffness_1d(), k), blocks);
    const auto ref = build_toeplitz(SymbolFn::stiffness_1d(), {k * blocks});
    const double diff = add(back, ref, 1.0, -1.0).max_abs();
    ok = ok && diff == 0.0;
    os << " reblock(k=" << k << ")_diff=" << diff;
  }
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cg_iteration_counts", cg_iteration_counts},
      {"tau_robustness", tau_robustness},
      {"cg_bound_outliers", cg_bound_outliers},
      {"outlier_rank", outlier_rank},
      {"symbol_distribution", symbol_distribution},
      {"stiffness_symbol_identity", stiffness_symbol_identity},
      {"multigrid_robustness", multigrid_robustness},
      {"preconditioner_ordering", preconditioner_ordering},
      {"oracle_equivalences", oracle_equivalences},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  bool any_run = false, all_pass = true;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && only != name) continue;
    any_run = true;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    std::printf("%s %s:%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (!any_run) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
