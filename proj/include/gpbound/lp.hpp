#pragma once

#include <Eigen/Dense>

#include "gpbound/sdp_problem.hpp"

namespace gpbound {

// min (or max) c^T x  s.t.  A x = b,  lo <= x <= hi  (either side may be missing).
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Bounds bounds;
  bool maximize = false;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus status);

struct LpOptions {
  int max_iter = 200000;
  // Dantzig pricing until this many consecutive degenerate pivots, then
  // Bland's rule until the next step that moves.
  int degenerate_switch = 50;
  int refactor_every = 64;
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
};

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd duals;    // row multipliers pi, in the sense of the input
  Eigen::VectorXd reduced;  // c - A^T pi
  double objective = 0.0;
  // Weak-duality value b^T pi + sum_j min/max over [lo_j, hi_j] of d_j x_j.
  // It bounds the optimum for any pi and is -inf (max: +inf) when a reduced
  // cost pairs with a missing bound.
  double dual_bound = 0.0;
  double cs_residual = 0.0;  // complementary slackness, relative
  double primal_residual = 0.0;
  int iterations = 0;
  bool certified = false;  // Optimal with cs_residual <= 1e-8
};

inline constexpr double kLpCertifyTol = 1e-8;

LpResult solve_dense_lp(const LpProblem& lp, const LpOptions& opt = {});

}  // namespace gpbound
