#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emi/assembly.hpp"
#include "emi/krylov.hpp"

namespace emi::tools {

enum class RhsKind { kSine, kUnit };

RhsKind parse_rhs(const std::string& s);
std::string to_string(RhsKind r);

/// One (N, tau, preconditioner) cell of an experiment grid.
struct CaseParams {
  int N = 32;
  int p = 1;
  double tau = 1.0;
  double sigma_e = 1.0;
  double sigma_i = 1.0;
  std::string precond = "identity";
  double tol = 1e-6;
  std::size_t maxit = 10000;
  RhsKind rhs = RhsKind::kSine;
  double omega = 1.0;
};

struct CaseResult {
  CaseParams params;
  std::size_t n = 0;
  SolveReport report;
  std::optional<std::string> error;
};

EmiSystem assemble_case(const CaseParams& c);

/// Assembles, builds the preconditioner and runs PCG. Errors are caught
/// and stored in the result.
CaseResult run_case(const CaseParams& c);

/// {n, N, p, tau, precond, rhs, iterations, rel_residual, seconds, converged}
nlohmann::json to_json(const CaseResult& r);

/// Runs fn(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

std::vector<CaseResult> run_grid(const std::vector<CaseParams>& cells, std::size_t workers);

/// file-safe cell name, e.g. "N32_tau0.01_ilu0_sine"
std::string cell_name(const CaseParams& c);

/// Parses key=value lines; '#' starts a comment. Unknown keys are rejected.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

}  // namespace emi::tools
