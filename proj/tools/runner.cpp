#include "runner.hpp"

#include <atomic>
#include <fstream>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>

#include "emi/grid.hpp"
#include "emi/io.hpp"
#include "emi/multigrid.hpp"
#include "emi/preconditioners.hpp"

namespace emi::tools {

RhsKind parse_rhs(const std::string& s) {
  if (s == "sine") return RhsKind::kSine;
  if (s == "unit") return RhsKind::kUnit;
  throw std::invalid_argument("unknown rhs '" + s + "' (expected sine or unit)");
}

std::string to_string(RhsKind r) { return r == RhsKind::kSine ? "sine" : "unit"; }

EmiSystem assemble_case(const CaseParams& c) {
  GridSpec spec;
  spec.N = c.N;
  spec.p = c.p;
  EmiParameters params{c.tau, c.sigma_e, c.sigma_i};
  EmiSystem sys = assemble_system(build_grid(spec), params);
  if (c.rhs == RhsKind::kUnit) sys.rhs = unit_rhs(sys.size());
  return sys;
}

CaseResult run_case(const CaseParams& c) {
  CaseResult out;
  out.params = c;
  try {
    const EmiSystem sys = assemble_case(c);
    out.n = sys.size();
    SolveConfig cfg;
    cfg.tol = c.tol;
    cfg.maxit = c.maxit;
    cfg.precond = c.precond;
    cfg.record_history = true;
    const PreconditionerKind kind = parse_preconditioner(c.precond);
    std::unique_ptr<Preconditioner> m;
    if (kind == PreconditionerKind::kMultigrid) {
      m = std::make_unique<MultigridPreconditioner>(
          std::make_shared<const MgHierarchy>(build_hierarchy(sys)));
    } else {
      m = make_preconditioner(sys.matrix, kind, c.omega);
    }
    out.report = cg_solve(sys.matrix, sys.rhs, *m, cfg);
    out.report.solution.clear();
    if (!out.report.converged) {
      out.error = "not converged after " + std::to_string(out.report.iterations) + " iterations";
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

nlohmann::json to_json(const CaseResult& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["N"] = r.params.N;
  j["p"] = r.params.p;
  j["tau"] = r.params.tau;
  j["precond"] = r.params.precond;
  j["rhs"] = to_string(r.params.rhs);
  j["iterations"] = r.report.iterations;
  j["rel_residual"] = r.report.relative_residual;
  j["seconds"] = r.report.seconds;
  j["converged"] = r.report.converged && !r.error;
  if (r.error) j["error"] = *r.error;
  return j;
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<CaseResult> run_grid(const std::vector<CaseParams>& cells, std::size_t workers) {
  std::vector<CaseResult> out(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) { out[i] = run_case(cells[i]); });
  return out;
}

std::string cell_name(const CaseParams& c) {
  return "N" + std::to_string(c.N) + "_tau" + io::format_number(c.tau) + "_" + c.precond + "_" +
         to_string(c.rhs);
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  static const std::set<std::string> known{"N",   "p",     "tau",   "sigma_e", "sigma_i", "precond",
                                           "tol", "maxit", "rhs",   "out",     "omega",   "jobs"};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known.count(key)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace emi::tools
