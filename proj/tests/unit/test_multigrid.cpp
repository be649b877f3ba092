#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emi/assembly.hpp"
#include "emi/krylov.hpp"
#include "emi/multigrid.hpp"
#include "oracles.hpp"

using namespace emi;

namespace {

double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST(Multigrid, LevelsAndTransfers) {
  const auto sys = assemble_system(build_grid({16}), {0.1});
  const auto h = build_hierarchy(sys);
  ASSERT_EQ(h.level_count(), 3u);
  EXPECT_EQ(h.level(0).dofs.N(), 16);
  EXPECT_EQ(h.level(1).dofs.N(), 8);
  EXPECT_EQ(h.level(2).dofs.N(), 4);
  for (std::size_t l = 0; l + 1 < h.level_count(); ++l) {
    const auto& f = h.level(l);
    const auto& c = h.level(l + 1);
    EXPECT_EQ(c.dofs.n_gamma() * 2, f.dofs.n_gamma());
    EXPECT_EQ(f.prolongation.rows(), f.dofs.size());
    EXPECT_EQ(f.prolongation.cols(), c.dofs.size());
    EXPECT_EQ((oracle::to_eigen(f.restriction) - oracle::to_eigen(f.prolongation).transpose())
                  .cwiseAbs().maxCoeff(), 0.0);
    const Eigen::MatrixXd p = oracle::to_eigen(f.prolongation);
    const Eigen::MatrixXd ref = p.transpose() * oracle::to_eigen(f.matrix) * p;
    EXPECT_LT((oracle::to_eigen(c.matrix) - ref).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(h.level(h.level_count() - 1).dofs.size(), h.config().coarse_threshold);
}

TEST(Multigrid, ProlongationInterpolatesBilinearFunctions) {
  const auto fine = build_grid({16});
  const auto coarse = build_grid({8});
  const auto p = prolongation(fine, coarse);
  std::vector<double> vc(coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const Point x = coarse.coordinate(k);
    vc[k] = 1.0 + 2.0 * x.x - 3.0 * x.y + x.x * x.y;
  }
  const auto vf = p.multiply(vc);
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const Point x = fine.coordinate(k);
    // Nodes next to the outer boundary lose the (skipped) Dirichlet weights.
    const double hc = coarse.h();
    const bool near_boundary = x.x < hc || x.y < hc || x.x > 1.0 - hc || x.y > 1.0 - hc;
    if (near_boundary) continue;
    EXPECT_NEAR(vf[k], 1.0 + 2.0 * x.x - 3.0 * x.y + x.x * x.y, 1e-14) << k;
  }
}

TEST(Multigrid, ProlongationKeepsSubdomainsApart) {
  const auto fine = build_grid({16});
  const auto coarse = build_grid({8});
  const auto p = prolongation(fine, coarse);
  const auto rp = p.row_offsets();
  const auto ci = p.col_indices();
  for (std::size_t i = 0; i < fine.size(); ++i) {
    for (std::size_t q = rp[i]; q < rp[i + 1]; ++q) {
      EXPECT_EQ(fine.subdomain(i), coarse.subdomain(ci[q]));
    }
  }
  // A membrane pair that gets the same coarse data on both sides stays a pair.
  std::vector<double> vc(coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) vc[k] = coarse.coordinate(k).x;
  const auto vf = p.multiply(vc);
  for (const auto& pr : gamma_pairing(fine)) EXPECT_NEAR(vf[pr.extra], vf[pr.intra], 1e-15);
}

TEST(Multigrid, VCycleOfZeroIsZero) {
  const auto sys = assemble_system(build_grid({16}), {1.0});
  const auto h = build_hierarchy(sys);
  const std::vector<double> z(sys.size(), 0.0);
  for (double v : h.v_cycle(z)) EXPECT_EQ(v, 0.0);
}

TEST(Multigrid, VCycleIsSymmetricPositive) {
  const auto sys = assemble_system(build_grid({16}), {0.01});
  const auto h = build_hierarchy(sys);
  std::mt19937 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto x = oracle::random_vector(sys.size(), rng);
    const auto y = oracle::random_vector(sys.size(), rng);
    const auto bx = h.v_cycle(x);
    const auto by = h.v_cycle(y);
    const double a = inner(y, bx), b = inner(x, by);
    EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(a)));
    EXPECT_GT(inner(x, bx), 0.0);
  }
}

TEST(Multigrid, CycleReducesEnergyError) {
  const auto sys = assemble_system(build_grid({32}), {0.1});
  const auto h = build_hierarchy(sys);
  std::mt19937 rng(13);
  const std::size_t n = sys.size();
  for (int t = 0; t < 20; ++t) {
    // Error propagation e -> e - B A e must contract in the A-norm.
    const auto e = oracle::random_vector(n, rng);
    const auto ae = sys.matrix.multiply(e);
    const auto bae = h.v_cycle(ae);
    std::vector<double> e1(n);
    for (std::size_t i = 0; i < n; ++i) e1[i] = e[i] - bae[i];
    const double before = inner(e, ae);
    const double after = inner(e1, sys.matrix.multiply(e1));
    EXPECT_LT(after, 0.5 * before);
  }
}

TEST(Multigrid, PreconditionedCgConverges) {
  const auto sys = assemble_system(build_grid({32}), {1e-3});
  const MultigridPreconditioner m(std::make_shared<MgHierarchy>(build_hierarchy(sys)));
  const auto r = cg_solve(sys.matrix, sys.rhs, m);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 15u);
}

TEST(Multigrid, Rejections) {
  EXPECT_THROW(build_hierarchy(assemble_system(build_grid({12}), {1.0})), std::invalid_argument);
  EXPECT_THROW(build_hierarchy(assemble_system(build_grid({4}), {1.0})), std::invalid_argument);
  MgConfig cfg;
  cfg.coarse_threshold = 10;
  EXPECT_THROW(build_hierarchy(assemble_system(build_grid({8}), {1.0}), cfg), std::length_error);
  cfg = {};
  cfg.jacobi_omega = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
