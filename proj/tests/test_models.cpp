#include <gtest/gtest.h>

#include <vector>

#include "gpbound/admm.hpp"
#include "gpbound/errors.hpp"
#include "gpbound/models.hpp"
#include "gpbound/rng.hpp"

using namespace gpbound;

namespace {

// All set partitions of {0..n-1} as label vectors.
void all_partitions(int n, std::vector<int>& cur, int groups,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c <= groups; ++c) {
    cur.push_back(c);
    all_partitions(n, cur, std::max(groups, c + 1), out);
    cur.pop_back();
  }
}

void expect_satisfies(const SdpProblem& p, const Eigen::MatrixXd& X) {
  const Eigen::VectorXd ax = p.apply_eq(X);
  for (int r = 0; r < p.num_eq(); ++r) EXPECT_NEAR(ax(r), p.b(r), 1e-12) << "eq row " << r;
  const Eigen::VectorXd bx = p.apply_ineq(X);
  for (int r = 0; r < p.num_ineq(); ++r) {
    if (p.ineq_bounds.has_lower(r)) { EXPECT_GE(bx(r), p.ineq_bounds.lower(r) - 1e-12); }
    if (p.ineq_bounds.has_upper(r)) { EXPECT_LE(bx(r), p.ineq_bounds.upper(r) + 1e-12); }
  }
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    if (p.box.has_lower(i)) { EXPECT_GE(X.data()[i], p.box.lower(i)); }
    if (p.box.has_upper(i)) { EXPECT_LE(X.data()[i], p.box.upper(i)); }
  }
}

}  // namespace

TEST(KeqModel, RowCounts) {
  const SdpProblem p = build_keq_sdp(complete_graph(4), 2);
  EXPECT_EQ(p.num_eq(), 8);
  EXPECT_EQ(p.num_ineq(), 0);
  EXPECT_TRUE(p.box.all_free());
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(build_keq_sdp(complete_graph(5), 2), InvalidInput);
}

TEST(KeqModel, DnnAddsNonnegativity) {
  const SdpProblem p = build_keq_dnn(complete_graph(4), 2);
  for (Eigen::Index i = 0; i < 16; ++i) {
    EXPECT_TRUE(p.box.has_lower(i));
    EXPECT_EQ(p.box.lower(i), 0.0);
    EXPECT_FALSE(p.box.has_upper(i));
  }
  EXPECT_EQ(p.tag.problem, ProblemKind::KEquipartition);
  EXPECT_EQ(p.tag.m, 2);
}

TEST(KeqModel, BlockDiagonalPointIsFeasible) {
  const SdpProblem p = build_keq_dnn(complete_graph(4), 2);
  expect_satisfies(p, comembership_matrix(Partition({0, 0, 1, 1})));
}

TEST(KeqModel, EveryEquipartitionMatrixIsFeasible) {
  const GraphInstance g = gen_rand_graph(6, 0.5, 1);
  const SdpProblem p = build_keq_dnn(g, 3);
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  all_partitions(6, cur, 0, parts);
  const PartitionSpec spec = make_keq(6, 3);
  int seen = 0;
  for (const auto& a : parts) {
    const Partition P(a);
    if (!is_feasible(P, spec)) continue;
    ++seen;
    const Eigen::MatrixXd X = comembership_matrix(P);
    expect_satisfies(p, X);
    EXPECT_NEAR(p.C.cwiseProduct(X).sum(), cut_value(g, P), 1e-9);
  }
  EXPECT_EQ(seen, 15);
}

TEST(KeqModel, CompleteGraphObjectiveIsConstant) {
  // On K_n, 1/2 <nI - J, X> = (n^2 - n m) / 2 whenever diag X = e and X e = m e.
  const int n = 6, k = 2, m = 3;
  const SdpProblem p = build_keq_sdp(complete_graph(n), k);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    // Feasible for the equality rows: I + random matrix with zero diagonal
    // and row sums m - 1, built from symmetric edge perturbations.
    Eigen::MatrixXd X = comembership_matrix(Partition({0, 0, 0, 1, 1, 1}));
    for (int rep = 0; rep < 10; ++rep) {
      int i = static_cast<int>(rng.index(n)), j = static_cast<int>(rng.index(n));
      int r = static_cast<int>(rng.index(n)), s = static_cast<int>(rng.index(n));
      if (i == j || r == s || i == r || j == s || i == s || j == r) continue;
      const double d = rng.uniform01();
      // Cycle i-j-s-r-i keeps row sums.
      X(i, j) += d; X(j, i) += d;
      X(r, s) += d; X(s, r) += d;
      X(i, r) -= d; X(r, i) -= d;
      X(j, s) -= d; X(s, j) -= d;
    }
    expect_satisfies(build_keq_sdp(complete_graph(n), k), X);
    EXPECT_NEAR(p.C.cwiseProduct(X).sum(), (n * n - n * m) / 2.0, 1e-9);
  }
}

TEST(GpkcModel, RowsAndBounds) {
  const Gpkc spec{Eigen::Vector3d(2, 3, 4), 7.0};
  const GraphInstance g = complete_graph(3);
  const SdpProblem sdp = build_gpkc_sdp(g, spec);
  const SdpProblem dnn = build_gpkc_dnn(g, spec);
  EXPECT_EQ(sdp.num_eq(), 3);
  EXPECT_EQ(sdp.num_ineq(), 3);
  for (int r = 0; r < 3; ++r) {
    EXPECT_FALSE(sdp.ineq_bounds.has_lower(r));
    EXPECT_EQ(sdp.ineq_bounds.upper(r), 7.0);
    EXPECT_EQ(dnn.ineq_bounds.lower(r), spec.a(r));
  }
  // B_i(X) = (X a)_i.
  Rng rng(1);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) X(i, j) = X(j, i) = rng.uniform01();
  const Eigen::VectorXd Xa = X * spec.a;
  const Eigen::VectorXd bx = dnn.apply_ineq(X);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(bx(r), Xa(r), 1e-12);
  EXPECT_TRUE(sdp.box.all_free());
  EXPECT_TRUE(dnn.box.has_lower(0));
}

TEST(GpkcModel, IdentityFeasibleAndFullBlockInfeasible) {
  const Gpkc spec{Eigen::Vector3d(1, 1, 1), 1.0};
  const SdpProblem p = build_gpkc_dnn(complete_graph(3), spec);
  expect_satisfies(p, Eigen::MatrixXd::Identity(3, 3));
  const Eigen::VectorXd bx = p.apply_ineq(Eigen::MatrixXd::Ones(3, 3));
  for (int r = 0; r < 3; ++r) EXPECT_GT(bx(r), p.ineq_bounds.upper(r));
  EXPECT_THROW(build_gpkc_dnn(complete_graph(3), Gpkc{Eigen::Vector3d(1, 2, 1), 1.5}),
               InfeasibleSpec);
}

TEST(Met, HandExample) {
  Eigen::Matrix3d X;
  X << 1, 1, 1, 1, 1, 0, 1, 0, 1;
  const auto cuts = separate_met(X, 10);
  ASSERT_FALSE(cuts.empty());
  EXPECT_EQ(cuts[0].i, 0);
  EXPECT_EQ(cuts[0].j, 1);
  EXPECT_EQ(cuts[0].r, 2);
  EXPECT_DOUBLE_EQ(cuts[0].violation, 1.0);
  EXPECT_EQ(cuts.size(), 1u);
}

TEST(Met, IdentityHasNoCuts) {
  EXPECT_TRUE(separate_met(Eigen::MatrixXd::Identity(7, 7), 100).empty());
}

TEST(Met, PartitionMatricesSatisfyAllTriangles) {
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  all_partitions(6, cur, 0, parts);
  EXPECT_EQ(parts.size(), 203u);
  for (const auto& a : parts) {
    EXPECT_TRUE(separate_met(comembership_matrix(Partition(a)), 1000).empty());
  }
}

TEST(Met, MatchesNaiveScanSortedDescending) {
  Rng rng(5);
  const int n = 7;
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) X(i, j) = X(j, i) = i == j ? 1.0 : rng.uniform01();
  int naive = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = j + 1; r < n; ++r)
        if (i != j && i != r && X(i, j) + X(i, r) - X(j, r) - 1.0 > kMetViolationTol) ++naive;
  const auto all = separate_met(X, 100000);
  EXPECT_EQ(static_cast<int>(all.size()), naive);
  for (std::size_t t = 0; t < all.size(); ++t) {
    const auto& c = all[t];
    EXPECT_NEAR(c.violation, X(c.i, c.j) + X(c.i, c.r) - X(c.j, c.r) - 1.0, 1e-15);
    if (t > 0) { EXPECT_GE(all[t - 1].violation, c.violation); }
  }
  const auto top = separate_met(X, 5);
  ASSERT_EQ(top.size(), std::min<std::size_t>(5, all.size()));
  for (std::size_t t = 0; t < top.size(); ++t) EXPECT_EQ(top[t].violation, all[t].violation);
}

TEST(Met, AddCuts) {
  const SdpProblem p = build_keq_dnn(complete_graph(6), 2);
  EXPECT_EQ(add_cuts(p, {}).num_ineq(), 0);
  EXPECT_EQ(add_cuts(p, {}).tag.relaxation, Relaxation::Dnn);
  const SdpProblem q = add_cuts(p, {{0, 1, 2, 0.5}, {3, 4, 5, 0.2}});
  EXPECT_EQ(q.num_ineq(), 2);
  EXPECT_EQ(q.tag.relaxation, Relaxation::DnnMet);
  EXPECT_FALSE(q.ineq_bounds.has_lower(0));
  EXPECT_EQ(q.ineq_bounds.upper(0), 1.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(6, 6);
  X(0, 1) = X(1, 0) = 1;
  X(0, 2) = X(2, 0) = 1;
  EXPECT_DOUBLE_EQ(q.apply_ineq(X)(0), 2.0);
  EXPECT_THROW(add_cuts(q, {{0, 2, 1, 0.1}}), InvalidInput);
  EXPECT_THROW(add_cuts(p, {{0, 0, 1, 0.1}}), InvalidInput);
}

TEST(NormalMatrix, PositiveDefiniteForBuiltProblemsUpTo60) {
  for (int n : {4, 12, 30, 60}) {
    const GraphInstance g = gen_rand_graph(n, 0.5, n);
    EXPECT_NO_THROW(NormalFactor{build_keq_sdp(g, 2)}) << n;
    EXPECT_NO_THROW(NormalFactor{build_keq_dnn(g, n / 2)}) << n;
    const GpkcInstance gi = gen_gpkc_instance(n, 0.5, 2, n);
    EXPECT_NO_THROW(NormalFactor{build_gpkc_dnn(gi.graph, gi.spec)}) << n;
    SdpProblem met = build_keq_dnn(g, 2);
    met = add_cuts(met, {{0, 1, 2, 1}, {1, 0, 3, 1}, {2, 1, 3, 1}});
    EXPECT_NO_THROW(NormalFactor{met}) << n;
  }
}
