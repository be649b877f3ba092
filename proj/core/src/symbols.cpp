#include "emi/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace emi {

SymbolFn::SymbolFn(std::string name, int arity, std::vector<CosineTerm> terms)
    : name_(std::move(name)), arity_(arity), terms_(std::move(terms)) {
  if (arity_ < 1 || arity_ > 2) throw std::invalid_argument("SymbolFn: arity must be 1 or 2");
  for (const CosineTerm& t : terms_) {
    if (static_cast<int>(t.k.size()) != arity_) {
      throw std::invalid_argument("SymbolFn: term index length differs from arity");
    }
  }
}

SymbolFn SymbolFn::stiffness_1d() { return {"f_1D", 1, {{{0}, 2.0}, {{1}, -2.0}}}; }

SymbolFn SymbolFn::mass_1d() { return {"h_1D", 1, {{{0}, 2.0 / 3.0}, {{1}, 1.0 / 3.0}}}; }

SymbolFn SymbolFn::q1_laplacian() {
  const double c = -2.0 / 3.0;
  return {"f_square",
          2,
          {{{0, 0}, 8.0 / 3.0}, {{1, 0}, c}, {{0, 1}, c}, {{1, 1}, c}, {{1, -1}, c}}};
}

SymbolFn SymbolFn::constant(double value, int arity) {
  return {"const", arity, {{std::vector<int>(static_cast<std::size_t>(arity), 0), value}}};
}

double SymbolFn::fourier_coefficient(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != arity_) {
    throw std::invalid_argument("fourier_coefficient: index length differs from arity");
  }
  const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
  double sum = 0.0;
  for (const CosineTerm& t : terms_) {
    bool plus = true, minus = true;
    for (int d = 0; d < arity_; ++d) {
      plus = plus && t.k[d] == k[d];
      minus = minus && t.k[d] == -k[d];
    }
    if (zero) {
      if (plus) sum += t.c;
    } else {
      if (plus) sum += 0.5 * t.c;
      if (minus) sum += 0.5 * t.c;
    }
  }
  return sum;
}

int SymbolFn::bandwidth() const {
  int w = 0;
  for (const CosineTerm& t : terms_) {
    if (t.c == 0.0) continue;
    for (int v : t.k) w = std::max(w, std::abs(v));
  }
  return w;
}

double eval_symbol(const SymbolFn& s, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != s.arity()) {
    throw std::invalid_argument("eval_symbol: " + s.name() + " takes " +
                                std::to_string(s.arity()) + " angle(s), got " +
                                std::to_string(theta.size()));
  }
  double f = 0.0;
  for (const CosineTerm& t : s.terms()) {
    double phase = 0.0;
    for (std::size_t d = 0; d < theta.size(); ++d) phase += t.k[d] * theta[d];
    f += t.c * std::cos(phase);
  }
  return f;
}

double eval_symbol(const SymbolFn& s, std::initializer_list<double> theta) {
  return eval_symbol(s, std::span<const double>(theta.begin(), theta.size()));
}

double CompositeSymbol::eval(double x, std::span<const double> t_intra,
                             std::span<const double> t_extra) const {
  return x <= r ? eval_symbol(intra, t_intra) : eval_symbol(extra, t_extra);
}

std::vector<double> sample_points(std::size_t m, double length, SampleGrid kind) {
  std::vector<double> pts(m);
  const double dm = static_cast<double>(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const double dj = static_cast<double>(j);
    switch (kind) {
      case SampleGrid::kInterior: pts[j - 1] = dj * length / (dm + 1.0); break;
      case SampleGrid::kRightEndpoint: pts[j - 1] = dj * length / dm; break;
      case SampleGrid::kMidpoint: pts[j - 1] = (dj - 0.5) * length / dm; break;
    }
  }
  return pts;
}

namespace {

// Values of s over the full tensor grid, unsorted.
void append_tensor_samples(const SymbolFn& s, std::span<const std::size_t> sizes,
                           SampleGrid kind, std::vector<double>& out) {
  if (static_cast<int>(sizes.size()) != s.arity()) {
    throw std::invalid_argument("sample_rearranged: grid has " + std::to_string(sizes.size()) +
                                " dimensions, symbol " + s.name() + " has arity " +
                                std::to_string(s.arity()));
  }
  if (s.arity() == 1) {
    for (double t : sample_points(sizes[0], std::numbers::pi, kind)) {
      out.push_back(eval_symbol(s, {t}));
    }
    return;
  }
  const auto t1 = sample_points(sizes[0], std::numbers::pi, kind);
  const auto t2 = sample_points(sizes[1], std::numbers::pi, kind);
  for (double a : t1)
    for (double b : t2) out.push_back(eval_symbol(s, {a, b}));
}

}  // namespace

std::vector<double> sample_rearranged(const SymbolFn& s, std::span<const std::size_t> sizes,
                                      SampleGrid kind) {
  std::vector<double> out;
  append_tensor_samples(s, sizes, kind, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sample_rearranged(const CompositeSymbol& g, std::size_t m_x,
                                      std::size_t m_theta, SampleGrid kind) {
  if (g.intra.arity() != g.extra.arity()) {
    throw std::invalid_argument("sample_rearranged: intra and extra symbols differ in arity");
  }
  const std::vector<std::size_t> sizes(static_cast<std::size_t>(g.intra.arity()), m_theta);
  std::vector<double> fi, fe;
  append_tensor_samples(g.intra, sizes, kind, fi);
  append_tensor_samples(g.extra, sizes, kind, fe);
  std::vector<double> out;
  out.reserve(m_x * fi.size());
  for (double x : sample_points(m_x, 1.0, kind)) {
    const auto& src = x <= g.r ? fi : fe;
    out.insert(out.end(), src.begin(), src.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CompositeGrid::total() const {
  std::size_t t = m_x;
  for (int d = 0; d < arity; ++d) t *= m_theta;
  return t;
}

CompositeGrid matched_composite_grid(std::size_t n, int arity) {
  if (n == 0) throw std::invalid_argument("matched_composite_grid: n must be positive");
  CompositeGrid best{0, 0, arity};
  std::size_t best_excess = 0;
  for (std::size_t m = 1;; ++m) {
    std::size_t block = 1;
    for (int d = 0; d < arity; ++d) block *= m;
    std::size_t mx = 4 * ((n + 4 * block - 1) / (4 * block));
    if (2 * mx < m) break;  // every larger m has m_x too small
    if (mx > 2 * m) continue;
    const CompositeGrid cand{mx, m, arity};
    const std::size_t excess = cand.total() - n;
    if (best.m_x == 0 || excess < best_excess) {
      best = cand;
      best_excess = excess;
    }
  }
  if (best.m_x == 0) throw std::logic_error("matched_composite_grid: no admissible grid");
  return best;
}

std::vector<double> trim_symmetric(std::span<const double> sorted, std::size_t count) {
  if (count > sorted.size()) throw std::invalid_argument("trim_symmetric: count exceeds size");
  const std::size_t excess = sorted.size() - count;
  const std::size_t front = excess / 2;
  return {sorted.begin() + static_cast<std::ptrdiff_t>(front),
          sorted.begin() + static_cast<std::ptrdiff_t>(front + count)};
}

SparseMatrix build_toeplitz(const SymbolFn& s, std::span<const std::size_t> sizes) {
  if (static_cast<int>(sizes.size()) != s.arity()) {
    throw std::invalid_argument("build_toeplitz: " + std::to_string(sizes.size()) +
                                " level sizes for a symbol of arity " +
                                std::to_string(s.arity()));
  }
  for (std::size_t n : sizes)
    if (n == 0) throw std::invalid_argument("build_toeplitz: level sizes must be positive");
  const int w = s.bandwidth();
  std::vector<Triplet> t;
  if (s.arity() == 1) {
    const auto n = static_cast<long>(sizes[0]);
    for (long i = 0; i < n; ++i) {
      for (long j = std::max(0L, i - w); j <= std::min(n - 1, i + w); ++j) {
        const int k = static_cast<int>(i - j);
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                     s.fourier_coefficient(std::span<const int>(&k, 1))});
      }
    }
    return SparseMatrix::from_triplets(sizes[0], sizes[0], std::move(t), true);
  }
  const auto n1 = static_cast<long>(sizes[0]);
  const auto n2 = static_cast<long>(sizes[1]);
  for (long i1 = 0; i1 < n1; ++i1) {
    for (long i2 = 0; i2 < n2; ++i2) {
      for (long j1 = std::max(0L, i1 - w); j1 <= std::min(n1 - 1, i1 + w); ++j1) {
        for (long j2 = std::max(0L, i2 - w); j2 <= std::min(n2 - 1, i2 + w); ++j2) {
          const int k[2] = {static_cast<int>(i1 - j1), static_cast<int>(i2 - j2)};
          t.push_back({static_cast<std::size_t>(i1 * n2 + i2),
                       static_cast<std::size_t>(j1 * n2 + j2), s.fourier_coefficient(k)});
        }
      }
    }
  }
  const std::size_t n = sizes[0] * sizes[1];
  return SparseMatrix::from_triplets(n, n, std::move(t), true);
}

SparseMatrix build_toeplitz(const SymbolFn& s, std::initializer_list<std::size_t> sizes) {
  return build_toeplitz(s, std::span<const std::size_t>(sizes.begin(), sizes.size()));
}

ReblockedSymbol reblock_symbol(const SymbolFn& s, std::size_t k) {
  if (s.arity() != 1) throw std::invalid_argument("reblock_symbol: symbol must be unilevel");
  if (k == 0 || static_cast<std::size_t>(s.bandwidth()) >= k) {
    throw std::invalid_argument("reblock_symbol: bandwidth " + std::to_string(s.bandwidth()) +
                                " must be smaller than block size " + std::to_string(k));
  }
  ReblockedSymbol r{k, DenseMatrix(k, k), DenseMatrix(k, k), DenseMatrix(k, k)};
  const auto ik = static_cast<int>(k);
  for (int a = 0; a < ik; ++a) {
    for (int b = 0; b < ik; ++b) {
      const int c0 = a - b, c1 = ik + a - b, cm = -ik + a - b;
      r.a0(a, b) = s.fourier_coefficient(std::span<const int>(&c0, 1));
      r.a1(a, b) = s.fourier_coefficient(std::span<const int>(&c1, 1));
      r.a_minus1(a, b) = s.fourier_coefficient(std::span<const int>(&cm, 1));
    }
  }
  return r;
}

SparseMatrix assemble_block_toeplitz(const ReblockedSymbol& r, std::size_t blocks) {
  const std::size_t k = r.k;
  std::vector<Triplet> t;
  const auto emit = [&](const DenseMatrix& a, std::size_t bi, std::size_t bj) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (a(i, j) != 0.0) t.push_back({bi * k + i, bj * k + j, a(i, j)});
  };
  for (std::size_t b = 0; b < blocks; ++b) {
    emit(r.a0, b, b);
    if (b + 1 < blocks) {
      emit(r.a1, b + 1, b);
      emit(r.a_minus1, b, b + 1);
    }
  }
  return SparseMatrix::from_triplets(blocks * k, blocks * k, std::move(t), true);
}

}  // namespace emi
