// emi: experiment runner for the EMI block system.
//
//   emi table1 --N 32,64,128 --tau 1,0.1,0.01,0.001 --out results
//   emi solve --N 8 --tau 1 --precond identity --rhs unit
//   emi bound-check --N 16 --out results

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "emi/assembly.hpp"
#include "emi/bounds.hpp"
#include "emi/grid.hpp"
#include "emi/io.hpp"
#include "emi/spectra.hpp"
#include "emi/symbols.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using namespace emi;
using namespace emi::tools;

namespace {

struct Options {
  std::vector<int> N;
  int p = 1;
  std::vector<double> tau;
  double sigma_e = 1.0;
  double sigma_i = 1.0;
  std::vector<std::string> precond;
  double tol = 1e-6;
  std::size_t maxit = 10000;
  std::string rhs = "sine";
  std::string out = "results";
  double omega = 1.0;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string config;
};

template <typename T>
std::vector<T> parse_list(const std::string& s, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
    if (!item.empty()) out.push_back(conv(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int to_int(const std::string& s) { return std::stoi(s); }
double to_double(const std::string& s) { return std::stod(s); }
std::string to_str(const std::string& s) { return s; }

// Values from the config file fill in whatever was not given on the command line.
void apply_config(CLI::App& sub, Options& o) {
  if (o.config.empty()) return;
  const auto kv = read_config_file(o.config);
  const auto unset = [&](const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  for (const auto& [key, value] : kv) {
    if (key == "N" && unset("--N")) o.N = parse_list(value, to_int);
    if (key == "p" && unset("--p")) o.p = std::stoi(value);
    if (key == "tau" && unset("--tau")) o.tau = parse_list(value, to_double);
    if (key == "sigma_e" && unset("--sigma-e")) o.sigma_e = std::stod(value);
    if (key == "sigma_i" && unset("--sigma-i")) o.sigma_i = std::stod(value);
    if (key == "precond" && unset("--precond")) o.precond = parse_list(value, to_str);
    if (key == "tol" && unset("--tol")) o.tol = std::stod(value);
    if (key == "maxit" && unset("--maxit")) o.maxit = std::stoul(value);
    if (key == "rhs" && unset("--rhs")) o.rhs = value;
    if (key == "out" && unset("--out")) o.out = value;
    if (key == "omega" && unset("--omega")) o.omega = std::stod(value);
    if (key == "jobs" && unset("--jobs")) o.jobs = std::stoul(value);
  }
}

void add_common(CLI::App* sub, Options& o, bool lists) {
  if (lists) {
    sub->add_option("--N", o.N, "elements per side (comma-separated list)")->delimiter(',');
    sub->add_option("--tau", o.tau, "tau values (comma-separated list)")->delimiter(',');
    sub->add_option("--precond", o.precond,
                    "identity, jacobi, ssor, ilu0, mg (comma-separated list)")
        ->delimiter(',');
  } else {
    sub->add_option("--N", o.N, "elements per side")->expected(1);
    sub->add_option("--tau", o.tau, "tau")->expected(1);
    sub->add_option("--precond", o.precond, "identity, jacobi, ssor, ilu0 or mg")->expected(1);
  }
  sub->add_option("--p", o.p, "element order (only 1)");
  sub->add_option("--sigma-e", o.sigma_e, "extracellular conductivity");
  sub->add_option("--sigma-i", o.sigma_i, "intracellular conductivity");
  sub->add_option("--tol", o.tol, "relative residual tolerance");
  sub->add_option("--maxit", o.maxit, "iteration cap");
  sub->add_option("--rhs", o.rhs, "sine or unit")->check(CLI::IsMember({"sine", "unit"}));
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--omega", o.omega, "SSOR relaxation");
  sub->add_option("--jobs", o.jobs, "worker threads");
  sub->add_option("--config", o.config, "key=value configuration file");
}

template <typename T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

CaseParams base_case(const Options& o) {
  CaseParams c;
  c.p = o.p;
  c.sigma_e = o.sigma_e;
  c.sigma_i = o.sigma_i;
  c.tol = o.tol;
  c.maxit = o.maxit;
  c.rhs = parse_rhs(o.rhs);
  c.omega = o.omega;
  return c;
}

EmiSystem assemble_from(const Options& o, int N, double tau) {
  CaseParams c = base_case(o);
  c.N = N;
  c.tau = tau;
  return assemble_case(c);
}

// Runs the grid, writes one JSON per cell plus the aggregate CSV.
// Timings are kept out of the CSV unless requested, so reruns are byte-identical.
int run_table(const Options& o, const std::vector<CaseParams>& cells, const std::string& name,
              bool with_seconds = false) {
  const fs::path out = o.out;
  const auto results = run_grid(cells, o.jobs);
  std::vector<std::string> header{"N", "n", "p", "tau", "precond", "rhs", "iterations",
                                  "rel_residual", "converged", "error"};
  if (with_seconds) header.insert(header.begin() + 8, "seconds");
  io::CsvTable table(header);
  bool partial = false;
  for (const CaseResult& r : results) {
    io::write_atomic(out / "cells" / (name + "_" + cell_name(r.params) + ".json"),
                     to_json(r).dump(2) + "\n");
    partial = partial || r.error.has_value();
    std::vector<std::string> row{std::to_string(r.params.N), std::to_string(r.n),
                                 std::to_string(r.params.p), io::format_number(r.params.tau),
                                 r.params.precond, to_string(r.params.rhs),
                                 std::to_string(r.report.iterations),
                                 io::format_number(r.report.relative_residual),
                                 r.report.converged && !r.error ? "true" : "false",
                                 r.error ? "\"" + *r.error + "\"" : ""};
    if (with_seconds) row.insert(row.begin() + 8, io::format_number(r.report.seconds));
    table.add_row(std::move(row));
    std::printf("%-10s N=%-4d tau=%-8s %-8s iterations=%zu%s\n", name.c_str(), r.params.N,
                io::format_number(r.params.tau).c_str(), r.params.precond.c_str(),
                r.report.iterations, r.error ? ("  [" + *r.error + "]").c_str() : "");
  }
  table.write(out / (name + ".csv"));
  if (partial) std::fprintf(stderr, "%s: partial table, some cells failed\n", name.c_str());
  return partial ? 2 : 0;
}

int cmd_assemble(const Options& o) {
  const EmiSystem sys = assemble_from(o, or_default(o.N, {32})[0], or_default(o.tau, {1.0})[0]);
  const fs::path out = o.out;
  io::write_matrix_market(out / "A.mtx", sys.matrix);
  io::write_csv_column(out / "rhs.csv", "rhs", sys.rhs);
  nlohmann::json j{{"n", sys.size()},
                   {"N", sys.dofs.N()},
                   {"p", sys.dofs.p()},
                   {"tau", sys.params.tau},
                   {"n_gamma", sys.dofs.n_gamma()},
                   {"n_extra", sys.dofs.n_extra()},
                   {"n_intra", sys.dofs.n_intra()},
                   {"nnz", sys.matrix.nnz()}};
  io::write_atomic(out / "assemble.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_solve(const Options& o) {
  CaseParams c = base_case(o);
  c.N = or_default(o.N, {32})[0];
  c.tau = or_default(o.tau, {1.0})[0];
  c.precond = or_default(o.precond, {"identity"})[0];
  const CaseResult r = run_case(c);
  const nlohmann::json j = to_json(r);
  io::write_atomic(fs::path(o.out) / ("solve_" + cell_name(c) + ".json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return r.error ? 2 : 0;
}

int cmd_spectrum(const Options& o) {
  const EmiSystem sys = assemble_from(o, or_default(o.N, {16})[0], or_default(o.tau, {1.0})[0]);
  const SpectrumReport s = dense_spectrum(sys.matrix);
  io::write_csv_column(fs::path(o.out) / "spectrum.csv", "eigenvalue", s.eigenvalues);
  std::printf("n=%zu lambda_min=%s lambda_max=%s residual=%s\n", s.dimension,
              io::format_number(s.eigenvalues.front()).c_str(),
              io::format_number(s.eigenvalues.back()).c_str(),
              io::format_number(s.residual).c_str());
  return 0;
}

int cmd_symbol_compare(const Options& o) {
  const EmiSystem sys = assemble_from(o, or_default(o.N, {32})[0], or_default(o.tau, {1.0})[0]);
  const SpectrumReport s = dense_spectrum(sys.matrix);
  const CompositeSymbol g{0.25, SymbolFn::q1_laplacian(), SymbolFn::q1_laplacian()};
  const CompositeGrid grid = matched_composite_grid(sys.size());
  const auto samples = trim_symmetric(sample_rearranged(g, grid.m_x, grid.m_theta), sys.size());
  const EsdDiscrepancy d = esd_discrepancy(s.eigenvalues, samples);
  const fs::path out = o.out;
  io::write_csv_column(out / "eigenvalues.csv", "eigenvalue", s.eigenvalues);
  io::write_csv_column(out / "symbol_samples.csv", "sample", samples);
  nlohmann::json j{{"n", sys.size()},
                   {"N", sys.dofs.N()},
                   {"tau", sys.params.tau},
                   {"r", g.r},
                   {"m_x", grid.m_x},
                   {"m_theta", grid.m_theta},
                   {"count", d.count},
                   {"sup_sorted", d.sup_sorted}};
  for (std::size_t i = 0; i < d.tags.size(); ++i) j["mean_difference"][d.tags[i]] = d.mean_difference[i];
  io::write_atomic(out / "symbol_compare.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_bound_check(const Options& o) {
  const int N = or_default(o.N, {16})[0];
  const auto taus = or_default(o.tau, {1.0, 0.1, 0.01, 0.001});
  const EmiSystem base = assemble_from(o, N, taus.front());
  const auto reports = outlier_report(base, taus, o.tol);
  const fs::path out = o.out;
  io::CsvTable table({"tau", "a", "b", "q", "two_N_gamma", "k_bound", "observed_iters"});
  for (const OutlierReport& r : reports) {
    table.add_row({io::format_number(r.tau), io::format_number(r.a), io::format_number(r.b),
                   std::to_string(r.q), std::to_string(2 * r.n_gamma), std::to_string(r.k_bound),
                   std::to_string(r.observed_iterations)});
    io::write_csv_column(out / ("bound_spectrum_tau" + io::format_number(r.tau) + ".csv"),
                         "eigenvalue", r.eigenvalues);
    std::printf("tau=%-8s a=%-12s b=%-12s q=%-3zu k=%-4zu observed=%zu kappa=%s\n",
                io::format_number(r.tau).c_str(), io::format_number(r.a).c_str(),
                io::format_number(r.b).c_str(), r.q, r.k_bound, r.observed_iterations,
                io::format_number(r.kappa).c_str());
  }
  table.write(out / "bound_check.csv");
  return 0;
}

std::vector<CaseParams> grid_cells(const Options& o, const std::vector<int>& Ns,
                                   const std::vector<double>& taus,
                                   const std::vector<std::string>& preconds) {
  std::vector<CaseParams> cells;
  for (const auto& pc : preconds) {
    for (double tau : taus) {
      for (int N : Ns) {
        CaseParams c = base_case(o);
        c.N = N;
        c.tau = tau;
        c.precond = pc;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMI block system: assembly, spectra, bounds and preconditioned CG"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"assemble", "assemble A_n and export Matrix Market + rhs"},
      {"solve", "one PCG solve, JSON report"},
      {"spectrum", "dense spectrum of A_n"},
      {"symbol-compare", "eigenvalues vs rearranged samples of g"},
      {"bound-check", "outlier analysis and CG bound over tau"},
      {"table1", "unpreconditioned CG over (N, tau)"},
      {"table2", "PCG with one V-cycle over (N, tau)"},
      {"table3", "iterations and runtime per preconditioner"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o, name.rfind("table", 0) == 0 || name == "bound-check");
    subs[name] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      apply_config(*sub, o);
      if (name == "assemble") return cmd_assemble(o);
      if (name == "solve") return cmd_solve(o);
      if (name == "spectrum") return cmd_spectrum(o);
      if (name == "symbol-compare") return cmd_symbol_compare(o);
      if (name == "bound-check") return cmd_bound_check(o);
      if (name == "table1") {
        return run_table(o, grid_cells(o, or_default(o.N, {32, 64, 128}),
                                       or_default(o.tau, {1.0, 0.1, 0.01, 0.001}), {"identity"}),
                         "table1");
      }
      if (name == "table2") {
        return run_table(o, grid_cells(o, or_default(o.N, {32, 64, 128, 256}),
                                       or_default(o.tau, {1.0, 0.1, 0.01, 0.001}), {"mg"}),
                         "table2");
      }
      if (name == "table3") {
        return run_table(o, grid_cells(o, or_default(o.N, {512}), or_default(o.tau, {0.01}),
                                       or_default(o.precond, std::vector<std::string>{
                                                                 "mg", "ilu0", "ssor", "jacobi",
                                                                 "identity"})),
                         "table3", true);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "emi: %s\n", e.what());
    return 1;
  }
  return 1;
}
