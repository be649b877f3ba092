#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "emi/assembly.hpp"
#include "emi/spectra.hpp"
#include "emi/symbols.hpp"
#include "oracles.hpp"

using namespace emi;
using std::numbers::pi;

TEST(Spectra, SmallClosedForms) {
  const auto id = dense_spectrum(SparseMatrix::identity(5));
  EXPECT_EQ(id.eigenvalues.size(), 5u);
  for (double l : id.eigenvalues) EXPECT_NEAR(l, 1.0, 1e-15);
  const auto two = dense_spectrum(SparseMatrix::from_triplets(
      2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}}, true));
  EXPECT_NEAR(two.eigenvalues[0], 1.0, 1e-15);
  EXPECT_NEAR(two.eigenvalues[1], 3.0, 1e-15);
  EXPECT_EQ(two.method, "dense");
}

TEST(Spectra, ToeplitzClosedForm) {
  for (std::size_t n : {9u, 99u}) {
    const auto s = dense_spectrum(build_toeplitz(SymbolFn::stiffness_1d(), {n}));
    double err = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double exact = 2.0 - 2.0 * std::cos(static_cast<double>(j) * pi / static_cast<double>(n + 1));
      err = std::max(err, std::abs(s.eigenvalues[j - 1] - exact));
    }
    EXPECT_LE(err, 1e-12) << n;
    EXPECT_LE(s.residual, 1e-10);
  }
}

TEST(Spectra, RandomSymmetricMatchesEigen) {
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 2u, 3u, 17u, 60u}) {
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = nd(rng);
    DenseSpectrumOptions opts;
    opts.spot_checks = 5;
    const auto s = dense_spectrum(a, opts);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    const auto ref = oracle::eigen_eigenvalues(m);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.eigenvalues[i], ref[i], 1e-12);
    EXPECT_LE(s.residual, 1e-10);
  }
}

TEST(Spectra, EmiSpectrumMatchesEigen) {
  const auto sys = assemble_system(build_grid({8}), {0.01});
  const auto s = dense_spectrum(sys.matrix);
  const auto ref = oracle::eigen_eigenvalues(sys.matrix);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(s.eigenvalues[i], ref[i], 1e-12);
  EXPECT_GT(s.eigenvalues.front(), 0.0);
}

TEST(Spectra, Guards) {
  DenseSpectrumOptions opts;
  opts.cap = 10;
  EXPECT_THROW(dense_spectrum(SparseMatrix::identity(11), opts), std::length_error);
  const auto ns = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_THROW(dense_spectrum(ns), std::invalid_argument);
}

TEST(Spectra, TridiagonalEigenvector) {
  const std::vector<double> d{2, 2, 2, 2, 2}, e{-1, -1, -1, -1};
  const auto ev = tridiagonal_eigenvalues(d, e);
  for (double l : ev) {
    const auto v = tridiagonal_eigenvector(d, e, l);
    for (std::size_t i = 0; i < 5; ++i) {
      double tv = d[i] * v[i];
      if (i > 0) tv += e[i - 1] * v[i - 1];
      if (i + 1 < 5) tv += e[i] * v[i + 1];
      EXPECT_NEAR(tv, l * v[i], 1e-12);
    }
  }
}

TEST(Spectra, LanczosExtremes) {
  const auto t = build_toeplitz(SymbolFn::stiffness_1d(), {99});
  const auto mx = extremal_eigenvalue(t, Extremal::kMax);
  EXPECT_TRUE(mx.converged);
  EXPECT_NEAR(mx.value, 2.0 - 2.0 * std::cos(99.0 * pi / 100.0), 1e-6);
  const auto id = extremal_eigenvalue(SparseMatrix::identity(20), Extremal::kMax);
  EXPECT_NEAR(id.value, 1.0, 1e-14);
  EXPECT_TRUE(id.converged);
  const std::vector<double> d{3, 5, 7};
  const auto mn = extremal_eigenvalue(SparseMatrix::diagonal(d), Extremal::kMinViaInverse);
  EXPECT_NEAR(mn.value, 3.0, 1e-8);
}

TEST(Spectra, LanczosAgreesWithDense) {
  for (int N : {8, 16}) {
    const auto sys = assemble_system(build_grid({N}), {1.0});
    const auto dense = dense_spectrum(sys.matrix);
    const auto mx = extremal_eigenvalue(sys.matrix, Extremal::kMax);
    EXPECT_NEAR(mx.value, dense.eigenvalues.back(), 1e-6 * dense.eigenvalues.back());
    const auto mn = extremal_eigenvalue(sys.matrix, Extremal::kMinViaInverse);
    EXPECT_NEAR(mn.value, dense.eigenvalues.front(), 1e-6 * dense.eigenvalues.front());
  }
}

TEST(Spectra, LanczosReportsNonConvergence) {
  LanczosOptions opts;
  opts.max_iterations = 3;
  opts.tol = 1e-16;
  const auto r = extremal_eigenvalue(build_toeplitz(SymbolFn::stiffness_1d(), {500}), Extremal::kMax, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
}

TEST(Spectra, EsdDiscrepancyExamples) {
  const std::vector<double> a{1, 2, 3, 4};
  const auto same = esd_discrepancy(a, a);
  for (double v : same.mean_difference) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(same.sup_sorted, 0.0);
  EXPECT_EQ(same.tags.size(), 3u);

  for (std::size_t n : {9u, 99u}) {
    const auto s = dense_spectrum(build_toeplitz(SymbolFn::stiffness_1d(), {n}));
    const std::vector<std::size_t> sizes{n};
    const auto samp = sample_rearranged(SymbolFn::stiffness_1d(), sizes, SampleGrid::kRightEndpoint);
    const auto d = esd_discrepancy(s.eigenvalues, samp);
    // Trace gives an eigenvalue mean of exactly 2; the samples include f(pi).
    EXPECT_NEAR(d.mean_difference[0], 2.0 / static_cast<double>(n), 1e-12);
  }
  const auto t = dense_spectrum(build_toeplitz(SymbolFn::q1_laplacian(), {12, 12}));
  double mean = 0.0;
  for (double l : t.eigenvalues) mean += l;
  EXPECT_NEAR(mean / 144.0, 8.0 / 3.0, 1e-12);

  const std::vector<double> longer{0, 1, 2, 3, 4, 5};
  const auto trimmed = esd_discrepancy(a, longer);
  EXPECT_EQ(trimmed.count, 4u);
  EXPECT_EQ(trimmed.sup_sorted, 0.0);
  EXPECT_THROW(esd_discrepancy({}, a), std::invalid_argument);
}

TEST(Spectra, NumericalRank) {
  const std::vector<double> ev{0.0, 1e-14, 0.5, -2.0};
  EXPECT_EQ(numerical_rank_symmetric(ev), 2u);
  EXPECT_EQ(numerical_rank_symmetric(std::vector<double>{0.0, 0.0}), 0u);
}
