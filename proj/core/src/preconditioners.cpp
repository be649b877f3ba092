#include "emi/preconditioners.hpp"

#include <algorithm>
#include <stdexcept>

namespace emi {

namespace {

std::vector<std::size_t> diagonal_positions(const SparseMatrix& a) {
  std::vector<std::size_t> pos(a.rows());
  const auto rp = a.row_offsets();
  const auto ci = a.col_indices();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto* first = ci.data() + rp[i];
    const auto* last = ci.data() + rp[i + 1];
    const auto* it = std::lower_bound(first, last, i);
    if (it == last || *it != i) {
      throw std::invalid_argument("preconditioner: zero diagonal entry in row " +
                                  std::to_string(i));
    }
    pos[i] = static_cast<std::size_t>(it - ci.data());
  }
  return pos;
}

}  // namespace

void require_nonzero_diagonal(const SparseMatrix& a) {
  const auto pos = diagonal_positions(a);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (a.values()[pos[i]] == 0.0) {
      throw std::invalid_argument("preconditioner: zero diagonal entry in row " +
                                  std::to_string(i));
    }
  }
}

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  std::copy(r.begin(), r.end(), z.begin());
}

JacobiPreconditioner::JacobiPreconditioner(const SparseMatrix& a) {
  require_nonzero_diagonal(a);
  inv_diag_ = a.diagonal();
  for (double& d : inv_diag_) d = 1.0 / d;
}

void JacobiPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
}

SsorPreconditioner::SsorPreconditioner(const SparseMatrix& a, double omega)
    : a_(&a), omega_(omega) {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw std::invalid_argument("ssor: omega must lie in (0, 2)");
  }
  require_nonzero_diagonal(a);
  diag_pos_ = diagonal_positions(a);
  diag_ = a.diagonal();
}

void SsorPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const auto rp = a_->row_offsets();
  const auto ci = a_->col_indices();
  const auto v = a_->values();
  const std::size_t n = r.size();
  const double w = omega_;
  // (D + wL) y = w (2 - w) r
  for (std::size_t i = 0; i < n; ++i) {
    double s = w * (2.0 - w) * r[i];
    for (std::size_t k = rp[i]; k < diag_pos_[i]; ++k) s -= w * v[k] * z[ci[k]];
    z[i] = s / diag_[i];
  }
  // (D + wU) z = D y
  for (std::size_t i = n; i-- > 0;) {
    double s = diag_[i] * z[i];
    for (std::size_t k = diag_pos_[i] + 1; k < rp[i + 1]; ++k) s -= w * v[k] * z[ci[k]];
    z[i] = s / diag_[i];
  }
}

Ilu0Preconditioner::Ilu0Preconditioner(const SparseMatrix& a) {
  require_nonzero_diagonal(a);
  const std::size_t n = a.rows();
  const auto rp = a.row_offsets();
  const auto ci = a.col_indices();
  std::vector<double> lu(a.values().begin(), a.values().end());
  diag_pos_ = diagonal_positions(a);
  std::vector<std::ptrdiff_t> where(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t k = rp[i]; k < diag_pos_[i]; ++k) {
      const std::size_t j = ci[k];
      const double piv = lu[diag_pos_[j]];
      lu[k] /= piv;
      const double lij = lu[k];
      for (std::size_t m = diag_pos_[j] + 1; m < rp[j + 1]; ++m) {
        const std::ptrdiff_t pos = where[ci[m]];
        if (pos >= 0) lu[static_cast<std::size_t>(pos)] -= lij * lu[m];
      }
    }
    if (lu[diag_pos_[i]] == 0.0) {
      throw std::domain_error("ilu0: zero pivot in row " + std::to_string(i));
    }
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = -1;
  }
  lu_ = SparseMatrix(n, n, {rp.begin(), rp.end()}, {ci.begin(), ci.end()}, std::move(lu));
}

void Ilu0Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const auto rp = lu_.row_offsets();
  const auto ci = lu_.col_indices();
  const auto v = lu_.values();
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t k = rp[i]; k < diag_pos_[i]; ++k) s -= v[k] * z[ci[k]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t k = diag_pos_[i] + 1; k < rp[i + 1]; ++k) s -= v[k] * z[ci[k]];
    z[i] = s / v[diag_pos_[i]];
  }
}

PreconditionerKind parse_preconditioner(const std::string& tag) {
  if (tag == "identity" || tag == "none") return PreconditionerKind::kIdentity;
  if (tag == "jacobi") return PreconditionerKind::kJacobi;
  if (tag == "ssor" || tag == "sor") return PreconditionerKind::kSsor;
  if (tag == "ilu0" || tag == "ilu") return PreconditionerKind::kIlu0;
  if (tag == "mg" || tag == "multigrid") return PreconditionerKind::kMultigrid;
  throw std::invalid_argument("unknown preconditioner '" + tag +
                              "' (expected identity, jacobi, ssor, ilu0 or mg)");
}

std::string to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::kIdentity: return "identity";
    case PreconditionerKind::kJacobi: return "jacobi";
    case PreconditionerKind::kSsor: return "ssor";
    case PreconditionerKind::kIlu0: return "ilu0";
    case PreconditionerKind::kMultigrid: return "mg";
  }
  return "?";
}

std::unique_ptr<Preconditioner> make_preconditioner(const SparseMatrix& a,
                                                    PreconditionerKind kind, double omega) {
  switch (kind) {
    case PreconditionerKind::kIdentity: return std::make_unique<IdentityPreconditioner>();
    case PreconditionerKind::kJacobi: return std::make_unique<JacobiPreconditioner>(a);
    case PreconditionerKind::kSsor: return std::make_unique<SsorPreconditioner>(a, omega);
    case PreconditionerKind::kIlu0: return std::make_unique<Ilu0Preconditioner>(a);
    case PreconditionerKind::kMultigrid:
      throw std::invalid_argument("make_preconditioner: use the multigrid module for mg");
  }
  throw std::logic_error("unreachable");
}

}  // namespace emi
