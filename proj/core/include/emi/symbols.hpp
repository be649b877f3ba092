#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "emi/dense.hpp"
#include "emi/sparse.hpp"

namespace emi {

/// c * cos(k . theta)
struct CosineTerm {
  std::vector<int> k;
  double c = 0.0;
};

/// Trigonometric polynomial f(theta) = sum_k c_k cos(k . theta) in one or two
/// angular variables. Even in theta by construction.
class SymbolFn {
 public:
  SymbolFn(std::string name, int arity, std::vector<CosineTerm> terms);

  /// 2 - 2 cos(theta)
  static SymbolFn stiffness_1d();
  /// 2/3 + 1/3 cos(theta)
  static SymbolFn mass_1d();
  /// Q1 Laplacian: 8/3 - 2/3 [cos t1 + cos t2 + cos(t1+t2) + cos(t1-t2)]
  static SymbolFn q1_laplacian();
  static SymbolFn constant(double value, int arity);

  const std::string& name() const { return name_; }
  int arity() const { return arity_; }
  const std::vector<CosineTerm>& terms() const { return terms_; }

  /// Fourier coefficient f_k = (1/(2pi)^d) int f(theta) e^{-i k.theta}.
  double fourier_coefficient(std::span<const int> k) const;
  /// Largest |k_j| over all terms with nonzero coefficient.
  int bandwidth() const;

 private:
  std::string name_;
  int arity_;
  std::vector<CosineTerm> terms_;
};

/// Throws std::invalid_argument on arity mismatch.
double eval_symbol(const SymbolFn& s, std::span<const double> theta);
double eval_symbol(const SymbolFn& s, std::initializer_list<double> theta);

/// g(x, t_i, t_e) = f_i(t_i) on x <= r, f_e(t_e) on x > r.
struct CompositeSymbol {
  double r = 0.25;
  SymbolFn intra;
  SymbolFn extra;

  double eval(double x, std::span<const double> t_intra, std::span<const double> t_extra) const;
};

/// Placement of m uniform samples on [0, L] (L = pi for angles, 1 for x).
enum class SampleGrid {
  kInterior,       // j L / (m+1), j = 1..m
  kRightEndpoint,  // j L / m,     j = 1..m
  kMidpoint,       // (j - 1/2) L / m
};

std::vector<double> sample_points(std::size_t m, double length, SampleGrid kind);

/// Samples of s on the tensor grid over [0, pi]^arity, sorted ascending.
std::vector<double> sample_rearranged(const SymbolFn& s, std::span<const std::size_t> sizes,
                                      SampleGrid kind = SampleGrid::kInterior);

/// Samples of g on m_x points in [0,1] times an m_theta^arity angular grid,
/// sorted ascending. The angular variable of the inactive branch only
/// replicates samples and is not enumerated.
std::vector<double> sample_rearranged(const CompositeSymbol& g, std::size_t m_x,
                                      std::size_t m_theta,
                                      SampleGrid kind = SampleGrid::kInterior);

struct CompositeGrid {
  std::size_t m_x = 0;
  std::size_t m_theta = 0;
  std::size_t total() const;
  int arity = 2;
};

/// Smallest-excess grid with m_x * m_theta^arity >= n, m_x a multiple of
/// 4 and m_x within a factor two of m_theta.
CompositeGrid matched_composite_grid(std::size_t n, int arity = 2);

/// Drops entries from both ends of a sorted list until `count` remain.
std::vector<double> trim_symmetric(std::span<const double> sorted, std::size_t count);

/// T_n(s) for one level (sizes = {n}) or two levels (sizes = {n1, n2},
/// flat index i1 * n2 + i2).
SparseMatrix build_toeplitz(const SymbolFn& s, std::span<const std::size_t> sizes);
SparseMatrix build_toeplitz(const SymbolFn& s, std::initializer_list<std::size_t> sizes);

/// Matrix-valued coefficients of f^[k]: A_j(a, b) = f_{jk + a - b}.
struct ReblockedSymbol {
  std::size_t k = 0;
  DenseMatrix a0;
  DenseMatrix a1;
  DenseMatrix a_minus1;
};

/// Throws std::invalid_argument if s is not unilevel or bandwidth >= k.
ReblockedSymbol reblock_symbol(const SymbolFn& s, std::size_t k);

/// Block tridiagonal Toeplitz matrix with `blocks` block rows; block (I, J)
/// is A_{I-J}.
SparseMatrix assemble_block_toeplitz(const ReblockedSymbol& r, std::size_t blocks);

}  // namespace emi
