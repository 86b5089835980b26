#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <optional>

#include "gpbound/lp.hpp"
#include "gpbound/rng.hpp"

using namespace gpbound;

namespace {

LpProblem make_lp(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd c, Bounds bounds,
                  bool maximize = false) {
  return LpProblem{std::move(A), std::move(b), std::move(c), std::move(bounds), maximize};
}

// Minimum over all basic solutions: choose m basic columns, put every other
// column at one of its (finite) bounds, solve for the basis.
std::optional<double> vertex_enumeration(const LpProblem& input) {
  // Reduce to a full-row-rank system first; an inconsistent one is infeasible.
  LpProblem lp = input;
  {
    Eigen::MatrixXd Ab(lp.A.rows(), lp.A.cols() + 1);
    Ab << lp.A, lp.b;
    Eigen::MatrixXd keptA(0, lp.A.cols());
    Eigen::VectorXd keptb(0);
    for (Eigen::Index i = 0; i < lp.A.rows(); ++i) {
      Eigen::MatrixXd trial(keptA.rows() + 1, lp.A.cols());
      trial << keptA, lp.A.row(i);
      if (Eigen::FullPivLU<Eigen::MatrixXd>(trial).rank() > keptA.rows()) {
        keptA = trial;
        keptb.conservativeResize(keptb.size() + 1);
        keptb(keptb.size() - 1) = lp.b(i);
      }
    }
    if (Eigen::FullPivLU<Eigen::MatrixXd>(Ab).rank() > keptA.rows()) return std::nullopt;
    lp.A = keptA;
    lp.b = keptb;
  }
  const int m = static_cast<int>(lp.A.rows());
  const int n = static_cast<int>(lp.A.cols());
  std::optional<double> best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    std::vector<int> basic, nonbasic;
    for (int j = 0; j < n; ++j) (mask >> j & 1u ? basic : nonbasic).push_back(j);
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = lp.A.col(basic[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() < m) continue;
    const int nn = static_cast<int>(nonbasic.size());
    for (unsigned side = 0; side < (1u << nn); ++side) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int t = 0; t < nn; ++t) x(nonbasic[t]) = side >> t & 1u ? lp.bounds.upper(nonbasic[t])
                                                                   : lp.bounds.lower(nonbasic[t]);
      const Eigen::VectorXd xb = lu.solve(lp.b - lp.A * x);
      bool ok = true;
      for (int i = 0; i < m; ++i) {
        const int j = basic[i];
        x(j) = xb(i);
        if (xb(i) < lp.bounds.lower(j) - 1e-9 || xb(i) > lp.bounds.upper(j) + 1e-9) ok = false;
      }
      if (!ok) continue;
      const double obj = lp.c.dot(x);
      if (!best || obj < *best) best = obj;
    }
  }
  return best;
}

}  // namespace

TEST(DenseLp, MaximizeOnSegment) {
  const LpResult r = solve_dense_lp(make_lp(Eigen::RowVector2d(1, 1), Eigen::VectorXd::Ones(1),
                                            Eigen::Vector2d(1, 0),
                                            Bounds::constant(2, 0.0, std::nullopt), true));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.dual_bound, 1.0, 1e-12);
  EXPECT_TRUE(r.certified);
}

TEST(DenseLp, Infeasible) {
  const LpResult r = solve_dense_lp(make_lp(Eigen::MatrixXd::Ones(1, 1),
                                            Eigen::VectorXd::Constant(1, -1.0),
                                            Eigen::VectorXd::Zero(1),
                                            Bounds::constant(1, 0.0, std::nullopt)));
  EXPECT_EQ(r.status, LpStatus::Infeasible);
  EXPECT_FALSE(r.certified);
}

TEST(DenseLp, Unbounded) {
  const LpResult r = solve_dense_lp(make_lp(Eigen::RowVector2d(1, -1), Eigen::VectorXd::Zero(1),
                                            Eigen::Vector2d(-1, 0),
                                            Bounds::constant(2, 0.0, std::nullopt)));
  EXPECT_EQ(r.status, LpStatus::Unbounded);
}

TEST(DenseLp, FreeVariables) {
  // min x1 + 2 x2, x1 + x2 = 3, x1 - x2 = 1, both free: unique point (2, 1).
  Eigen::Matrix2d A;
  A << 1, 1, 1, -1;
  const LpResult r = solve_dense_lp(make_lp(A, Eigen::Vector2d(3, 1), Eigen::Vector2d(1, 2),
                                            Bounds::free(2)));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 4.0, 1e-12);
  EXPECT_NEAR(r.dual_bound, 4.0, 1e-10);
}

TEST(DenseLp, UpperBoundedVariables) {
  // max x1 + x2 s.t. x1 - x2 = 0, 0 <= x <= 2.
  const LpResult r = solve_dense_lp(make_lp(Eigen::RowVector2d(1, -1), Eigen::VectorXd::Zero(1),
                                            Eigen::Vector2d(1, 1), Bounds::constant(2, 0.0, 2.0),
                                            true));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 4.0, 1e-12);
}

TEST(DenseLp, DegenerateProblem) {
  // Many equal-cost redundant directions; Bland's fallback must not cycle.
  Eigen::MatrixXd A(3, 6);
  A << 1, 1, 1, 0, 0, 0,
       0, 1, 0, 1, 1, 0,
       0, 0, 1, 0, 1, 1;
  const LpResult r = solve_dense_lp(make_lp(A, Eigen::Vector3d(0, 0, 0), Eigen::VectorXd::Ones(6),
                                            Bounds::constant(6, 0.0, std::nullopt)));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
}

TEST(DenseLp, RedundantRows) {
  Eigen::MatrixXd A(3, 3);
  A << 1, 1, 0, 0, 1, 1, 1, 2, 1;  // row 3 = row 1 + row 2
  const LpResult r = solve_dense_lp(make_lp(A, Eigen::Vector3d(1, 1, 2), Eigen::Vector3d(1, 0, 1),
                                            Bounds::constant(3, 0.0, std::nullopt)));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_NEAR(r.x(1), 1.0, 1e-12);
}

TEST(DenseLp, RandomAgainstVertexEnumeration) {
  Rng rng(77);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + static_cast<int>(rng.index(7));  // 2..8 variables
    const int m = 1 + static_cast<int>(rng.index(std::min(n - 1, 4)));
    Eigen::MatrixXd A(m, n);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.uniform_int(-3, 3);
    Eigen::VectorXd c(n), b(m);
    for (int j = 0; j < n; ++j) c(j) = rng.uniform_int(-5, 5);
    Bounds bd = Bounds::free(n);
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) {
      const double lo = rng.uniform_int(-2, 0), hi = lo + rng.uniform_int(1, 4);
      bd.set(j, lo, hi);
      x0(j) = lo + (hi - lo) * rng.uniform01();
    }
    // Half the instances are feasible by construction.
    if (t % 2 == 0) {
      b = A * x0;
    } else {
      for (int i = 0; i < m; ++i) b(i) = rng.uniform_int(-10, 10);
    }
    const LpProblem lp = make_lp(A, b, c, bd);
    const std::optional<double> expect = vertex_enumeration(lp);
    const LpResult r = solve_dense_lp(lp);
    if (expect) {
      ++optimal;
      ASSERT_EQ(r.status, LpStatus::Optimal) << "trial " << t;
      EXPECT_NEAR(r.objective, *expect, 1e-8 * (1 + std::abs(*expect))) << "trial " << t;
      EXPECT_LE(r.dual_bound, r.objective + 1e-8 * (1 + std::abs(r.objective)));
      EXPECT_NEAR(r.dual_bound, r.objective, 1e-7 * (1 + std::abs(r.objective)));
      EXPECT_TRUE(r.certified) << "trial " << t;
    } else {
      ++infeasible;
      EXPECT_EQ(r.status, LpStatus::Infeasible) << "trial " << t;
    }
  }
  EXPECT_GT(optimal, 100);
  EXPECT_GT(infeasible, 10);
}

TEST(DenseLp, DualBoundIsValidForAnyMultiplier) {
  // min over the box of c^T x with one equality; the reported bound for the
  // returned multipliers never exceeds the optimum.
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const int n = 5;
    Eigen::MatrixXd A(2, n);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.uniform01() - 0.5;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = rng.uniform01() - 0.5;
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.5);
    const LpProblem lp = make_lp(A, A * x0, c, Bounds::constant(n, 0.0, 1.0));
    const LpResult r = solve_dense_lp(lp);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_LE(r.dual_bound, r.objective + 1e-10);
    EXPECT_LE(r.primal_residual, kLpCertifyTol);
  }
}

TEST(DenseLp, IterationLimit) {
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 1, -1, 0, 1;
  LpOptions opt;
  opt.max_iter = 0;
  const LpResult r = solve_dense_lp(make_lp(A, Eigen::Vector2d(2, 1), Eigen::Vector4d(-1, -2, 0, 0),
                                            Bounds::constant(4, 0.0, std::nullopt)),
                                    opt);
  EXPECT_EQ(r.status, LpStatus::IterationLimit);
  EXPECT_EQ(to_string(LpStatus::IterationLimit).empty(), false);
}
