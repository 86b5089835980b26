#include "gpbound/admm.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gpbound/errors.hpp"
#include "gpbound/spectral.hpp"

namespace gpbound {

AdmmState AdmmState::zeros(const SdpProblem& p, double sigma) {
  AdmmState st;
  st.X = Eigen::MatrixXd::Zero(p.n, p.n);
  st.Z = Eigen::MatrixXd::Zero(p.n, p.n);
  st.S = Eigen::MatrixXd::Zero(p.n, p.n);
  st.y = Eigen::VectorXd::Zero(p.num_eq());
  st.ybar = Eigen::VectorXd::Zero(p.num_ineq());
  st.v = Eigen::VectorXd::Zero(p.num_ineq());
  st.s = Eigen::VectorXd::Zero(p.num_ineq());
  st.sigma = sigma;
  return st;
}

AdmmState AdmmState::padded_for(const SdpProblem& p) const {
  if (X.rows() != p.n || y.size() != p.num_eq() || ybar.size() > p.num_ineq()) {
    throw InvalidInput("warm start does not match problem dimensions");
  }
  AdmmState st = *this;
  const Eigen::Index old_q = ybar.size();
  const Eigen::Index q = p.num_ineq();
  st.ybar.conservativeResize(q);
  st.v.conservativeResize(q);
  st.s.conservativeResize(q);
  for (Eigen::Index r = old_q; r < q; ++r) {
    st.ybar(r) = 0.0;
    st.v(r) = 0.0;
    st.s(r) = p.ineq_bounds.project(r, p.ineq_rows[r].inner(X));
  }
  return st;
}

double ResidualRecord::max() const {
  return std::max({eps_dc, eps_pc, eps_pb, eps_opt_m, eps_opt_v});
}

namespace {

inline Eigen::Index svec_index(int i, int j) {
  return static_cast<Eigen::Index>(j) * (j + 1) / 2 + i;  // i <= j
}

// Unblocked Cholesky used only to locate the failing pivot.
int first_dependent_row(const Eigen::MatrixXd& Q, double rel_tol) {
  const Eigen::Index N = Q.rows();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    double d = Q(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > rel_tol * Q(j, j))) return static_cast<int>(j);
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < N; ++i) {
      L(i, j) = (Q(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  return -1;
}

constexpr double kPivotTol = 1e-12;

}  // namespace

Eigen::MatrixXd normal_matrix(const SdpProblem& p) {
  const Eigen::Index rows = p.num_eq() + p.num_ineq();
  const Eigen::Index cols = static_cast<Eigen::Index>(p.n) * (p.n + 1) / 2;
  std::vector<Eigen::Triplet<double>> trips;
  auto push_row = [&](Eigen::Index r, const SymSparse& row) {
    for (const auto& e : row.entries()) {
      const double w = e.i == e.j ? e.value : std::numbers::sqrt2 * e.value;
      trips.emplace_back(r, svec_index(e.i, e.j), w);
    }
  };
  for (int r = 0; r < p.num_eq(); ++r) push_row(r, p.eq_rows[r]);
  for (int r = 0; r < p.num_ineq(); ++r) push_row(p.num_eq() + r, p.ineq_rows[r]);
  Eigen::SparseMatrix<double, Eigen::RowMajor> R(rows, cols);
  R.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> RRt = R * R.transpose();
  Eigen::MatrixXd Q = Eigen::MatrixXd(RRt);
  for (int r = 0; r < p.num_ineq(); ++r) Q(p.num_eq() + r, p.num_eq() + r) += 1.0;
  return Q;
}

NormalFactor::NormalFactor(const SdpProblem& p) : Q_(normal_matrix(p)) {
  if (Q_.rows() == 0) return;
  llt_.compute(Q_);
  int bad = -1;
  if (llt_.info() != Eigen::Success) {
    bad = first_dependent_row(Q_, kPivotTol);
    if (bad < 0) bad = 0;
  } else {
    const Eigen::MatrixXd L = llt_.matrixL();
    for (Eigen::Index i = 0; i < Q_.rows(); ++i) {
      if (!(L(i, i) * L(i, i) > kPivotTol * Q_(i, i))) {
        bad = static_cast<int>(i);
        break;
      }
    }
  }
  if (bad >= 0) {
    const bool eq = bad < p.num_eq();
    throw FactorizationError(
        std::string("constraint rows are linearly dependent: ") +
            (eq ? "equality row " + std::to_string(bad)
                : "inequality row " + std::to_string(bad - p.num_eq())) +
            " lies in the span of earlier rows",
        bad);
  }
}

Eigen::VectorXd NormalFactor::solve(const Eigen::VectorXd& rhs) const {
  if (Q_.rows() == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd w = llt_.matrixL().solve(rhs);
  llt_.matrixU().solveInPlace(w);
  return w;
}

Eigen::VectorXd y_update_rhs(const AdmmState& st, const SdpProblem& p) {
  const Eigen::MatrixXd T = st.S + st.Z - p.C + st.X / st.sigma;
  Eigen::VectorXd rhs(p.num_eq() + p.num_ineq());
  rhs.head(p.num_eq()) = p.b / st.sigma - p.apply_eq(T);
  rhs.tail(p.num_ineq()) = -p.apply_ineq(T) + st.v + st.s / st.sigma;
  return rhs;
}

MultiplierBlock update_y(const AdmmState& st, const NormalFactor& factor, const SdpProblem& p) {
  const Eigen::VectorXd w = factor.solve(y_update_rhs(st, p));
  return {w.head(p.num_eq()), w.tail(p.num_ineq())};
}

Eigen::MatrixXd box_dual_step(const Bounds& box, const Eigen::MatrixXd& M, double sigma) {
  Eigen::MatrixXd S(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.size(); ++i) {
    // Free entries are exactly zero rather than a rounding residue.
    const bool free = !box.has_lower(i) && !box.has_upper(i);
    S.data()[i] = free ? 0.0 : box.project(i, sigma * M.data()[i]) / sigma - M.data()[i];
  }
  return S;
}

Eigen::MatrixXd update_S(const AdmmState& st, const SdpProblem& p) {
  const Eigen::MatrixXd M = p.adjoint(st.y, st.ybar) + st.Z + st.X / st.sigma - p.C;
  return box_dual_step(p.box, M, st.sigma);
}

ConeStep cone_step(const Eigen::MatrixXd& N, double sigma) {
  PsdSplit split = psd_split(N);
  return {-split.minus, sigma * split.plus};
}

Eigen::MatrixXd cone_argument(const AdmmState& st, const SdpProblem& p) {
  return p.adjoint(st.y, st.ybar) + st.S + st.X / st.sigma - p.C;
}

Eigen::VectorXd update_v(const Bounds& slack_bounds, const Eigen::VectorXd& ybar,
                         const Eigen::VectorXd& s, double sigma) {
  // Minimizer of -F2(v) + <v, s> + sigma/2 ||v - ybar||^2.
  Eigen::VectorXd v(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const bool free = !slack_bounds.has_lower(i) && !slack_bounds.has_upper(i);
    const double shifted = s(i) - sigma * ybar(i);
    v(i) = free ? 0.0 : slack_bounds.project(i, shifted) / sigma - (s(i) / sigma - ybar(i));
  }
  return v;
}

Eigen::VectorXd update_s(const Bounds& slack_bounds, const Eigen::VectorXd& ybar,
                         const Eigen::VectorXd& s, double sigma) {
  // s + sigma (v_new - ybar) simplifies to this projection.
  Eigen::VectorXd shifted = s - sigma * ybar;
  slack_bounds.project_inplace(shifted.data());
  return shifted;
}

ZvBlock update_Z_v(const AdmmState& st, const SdpProblem& p) {
  return {cone_step(cone_argument(st, p), st.sigma).Z,
          update_v(p.ineq_bounds, st.ybar, st.s, st.sigma)};
}

PrimalBlock update_primal(const AdmmState& st, const SdpProblem& p) {
  return {cone_step(cone_argument(st, p), st.sigma).X,
          update_s(p.ineq_bounds, st.ybar, st.s, st.sigma)};
}

ResidualRecord residuals(const AdmmState& st, const SdpProblem& p) {
  ResidualRecord r;
  const Eigen::MatrixXd dual = p.adjoint(st.y, st.ybar) + st.Z + st.S - p.C;
  r.eps_dc = dual.norm() / (1.0 + p.C.norm()) + (st.v - st.ybar).norm() / (1.0 + st.y.norm());

  r.eps_pc = (p.apply_eq(st.X) - p.b).norm() / (1.0 + p.b.norm());
  if (p.num_ineq() > 0) r.eps_pc += (p.apply_ineq(st.X) - st.s).norm() / (1.0 + st.s.norm());

  Eigen::MatrixXd PX = st.X;
  p.box.project_inplace(PX.data());
  r.eps_pb = (st.X - PX).norm() / (1.0 + st.X.norm());

  Eigen::MatrixXd PXS = st.X - st.S;
  p.box.project_inplace(PXS.data());
  r.eps_opt_m = (st.X - PXS).norm() / (1.0 + st.X.norm() + st.S.norm());

  if (p.num_ineq() > 0) {
    Eigen::VectorXd Psv = st.s - st.v;
    p.ineq_bounds.project_inplace(Psv.data());
    r.eps_opt_v = (st.s - Psv).norm() / (1.0 + st.v.norm() + st.s.norm());
  }
  return r;
}

StepRule resolve_rule(StepRule rule, const SdpProblem& p) {
  if (rule != StepRule::Auto) return rule;
  return p.num_ineq() == 0 ? StepRule::Adaptive : StepRule::Classic;
}

double adapt_sigma(const AdmmState& st, const ResidualRecord& res, StepRule rule,
                   const AdmmParams& params) {
  double sigma = st.sigma;
  switch (rule) {
    case StepRule::Fixed:
    case StepRule::Auto:
      return sigma;
    case StepRule::Adaptive: {
      const double nx = st.X.norm();
      const double nz = st.Z.norm();
      if (nz == 0.0) {
        sigma = nx == 0.0 ? sigma : params.sigma_max;
      } else {
        sigma = nx / nz;
      }
      break;
    }
    case StepRule::Classic: {
      if (params.classic_every > 0 && st.iter % params.classic_every != 0) return sigma;
      if (res.eps_dc == 0.0) {
        if (res.eps_pc > 0.0) sigma /= params.tau;
        break;
      }
      // A large sigma drives the dual residual down at the expense of the
      // primal one.
      const double ratio = res.eps_pc / res.eps_dc;
      if (ratio > params.c_ratio) {
        sigma /= params.tau;
      } else if (ratio < 1.0 / params.c_ratio) {
        sigma *= params.tau;
      }
      break;
    }
  }
  return std::clamp(sigma, params.sigma_min, params.sigma_max);
}

Eigen::MatrixXd clamp_box_dual(const Bounds& box, const Eigen::MatrixXd& S, double* removed) {
  Eigen::MatrixXd out = S;
  double mass = 0.0;
  for (Eigen::Index idx = 0; idx < out.size(); ++idx) {
    double& x = out.data()[idx];
    if ((x > 0.0 && !box.has_lower(idx)) || (x < 0.0 && !box.has_upper(idx))) {
      mass += std::abs(x);
      x = 0.0;
    }
  }
  if (removed) *removed = mass;
  return out;
}

Eigen::VectorXd clamp_slack_dual(const Bounds& bounds, const Eigen::VectorXd& v, double* removed) {
  Eigen::VectorXd out = v;
  double mass = 0.0;
  for (Eigen::Index r = 0; r < out.size(); ++r) {
    if ((out(r) > 0.0 && !bounds.has_lower(r)) || (out(r) < 0.0 && !bounds.has_upper(r))) {
      mass += std::abs(out(r));
      out(r) = 0.0;
    }
  }
  if (removed) *removed = mass;
  return out;
}

DualObjective dual_objective(const SdpProblem& p, const Eigen::VectorXd& y,
                             const Eigen::MatrixXd& S, const Eigen::VectorXd& v) {
  DualObjective d;
  double mass_S = 0.0;
  double mass_v = 0.0;
  const Eigen::MatrixXd Sc = clamp_box_dual(p.box, S, &mass_S);
  const Eigen::VectorXd vc = clamp_slack_dual(p.ineq_bounds, v, &mass_v);
  d.clamped = mass_S + mass_v;
  bool unbounded = false;  // cannot trigger after clamping
  double value = p.b.dot(y);
  for (Eigen::Index idx = 0; idx < Sc.size(); ++idx) {
    value += p.box.support_term(idx, Sc.data()[idx], unbounded);
  }
  for (Eigen::Index r = 0; r < vc.size(); ++r) {
    value += p.ineq_bounds.support_term(r, vc(r), unbounded);
  }
  d.value = value;
  return d;
}

namespace {

void write_trace_row(std::ostream& out, const AdmmState& st, const ResidualRecord& r,
                     double primal, double dual) {
  out << st.iter << ',' << r.eps_dc << ',' << r.eps_pc << ',' << r.eps_pb << ','
      << r.eps_opt_m << ',' << r.eps_opt_v << ',' << st.sigma << ',' << primal << ','
      << dual << '\n';
}

double frobenius(const SymSparse& row) {
  double sq = 0.0;
  for (const auto& e : row.entries()) sq += (e.i == e.j ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(sq);
}

// Row r of B is divided by its Frobenius norm, along with l_r and u_r. The
// knapsack rows carry vertex weights in the thousands next to unit equality
// rows, and without this the iteration stalls around 1e-4.
SdpProblem equilibrated(const SdpProblem& p, Eigen::VectorXd& d) {
  SdpProblem out = p;
  d.resize(p.num_ineq());
  for (int r = 0; r < p.num_ineq(); ++r) {
    const double norm = frobenius(p.ineq_rows[r]);
    d(r) = norm > 0.0 ? 1.0 / norm : 1.0;
    std::vector<SymEntry> entries = p.ineq_rows[r].entries();
    for (auto& e : entries) e.value *= d(r);
    out.ineq_rows[r] = SymSparse(std::move(entries));
    const Bounds& bd = p.ineq_bounds;
    out.ineq_bounds.set(r, bd.has_lower(r) ? std::optional<double>(bd.lower(r) * d(r)) : std::nullopt,
                        bd.has_upper(r) ? std::optional<double>(bd.upper(r) * d(r)) : std::nullopt);
  }
  return out;
}

AdmmResult solve_unscaled(const SdpProblem& p, const AdmmParams& params,
                          std::optional<AdmmState> warm_start);

}  // namespace

AdmmResult solve(const SdpProblem& p, const AdmmParams& params,
                 std::optional<AdmmState> warm_start) {
  p.validate();
  if (!params.equilibrate || p.num_ineq() == 0) return solve_unscaled(p, params, warm_start);
  Eigen::VectorXd d;
  const SdpProblem scaled = equilibrated(p, d);
  if (warm_start) {
    AdmmState w = warm_start->padded_for(p);
    w.s = w.s.cwiseProduct(d);
    w.ybar = w.ybar.cwiseQuotient(d);
    w.v = w.v.cwiseQuotient(d);
    warm_start = std::move(w);
  }
  AdmmResult result = solve_unscaled(scaled, params, warm_start);
  AdmmState& st = result.state;
  st.s = st.s.cwiseQuotient(d);
  st.ybar = st.ybar.cwiseProduct(d);
  st.v = st.v.cwiseProduct(d);
  const DualObjective dual = dual_objective(p, st.y, st.S, st.v);
  result.dual_obj = dual.value;
  result.dual_clamped = dual.clamped;
  return result;
}

namespace {

AdmmResult solve_unscaled(const SdpProblem& p, const AdmmParams& params,
                          std::optional<AdmmState> warm_start) {
  p.validate();
  if (!(params.sigma0 > 0.0)) throw InvalidInput("sigma0 must be positive");
  if (!(params.eps_tol > 0.0)) throw InvalidInput("eps_tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  const NormalFactor factor(p);
  const StepRule rule = resolve_rule(params.rule, p);
  const bool free_box = p.box.all_free();

  AdmmResult result;
  AdmmState& st = result.state;
  st = warm_start ? warm_start->padded_for(p) : AdmmState::zeros(p, params.sigma0);
  const int first_iter = st.iter;
  if (params.trace && params.trace_every > 0) *params.trace << kTraceHeader << '\n';

  ResidualRecord res;
  bool converged = false;
  while (st.iter - first_iter < params.max_iter) {
    const double sigma = st.sigma;

    const MultiplierBlock mult = update_y(st, factor, p);
    st.y = mult.y;
    st.ybar = mult.ybar;
    const Eigen::MatrixXd Aty = p.adjoint(st.y, st.ybar);

    const Eigen::MatrixXd X_over_sigma = st.X / sigma;
    if (free_box) {
      st.S.setZero();
    } else {
      st.S = box_dual_step(p.box, Aty + st.Z + X_over_sigma - p.C, sigma);
    }

    ConeStep cone = cone_step(Aty + st.S + X_over_sigma - p.C, sigma);
    st.Z = std::move(cone.Z);
    st.X = std::move(cone.X);
    const Eigen::VectorXd v_new = update_v(p.ineq_bounds, st.ybar, st.s, sigma);
    st.s = update_s(p.ineq_bounds, st.ybar, st.s, sigma);
    st.v = v_new;
    ++st.iter;

    if (!st.X.allFinite() || !st.Z.allFinite() || !st.y.allFinite()) {
      throw SolverDiverged("non-finite iterate at ADMM iteration " + std::to_string(st.iter) +
                           " (sigma = " + std::to_string(sigma) + ")");
    }

    res = residuals(st, p);
    const double worst = res.max();
    if (params.record_history) result.history.push_back(worst);
    if (params.trace && params.trace_every > 0 && st.iter % params.trace_every == 0) {
      write_trace_row(*params.trace, st, res, p.C.cwiseProduct(st.X).sum(),
                      dual_objective(p, st.y, st.S, st.v).value);
    }
    if (worst <= params.eps_tol) {
      converged = true;
      break;
    }
    st.sigma = adapt_sigma(st, res, rule, params);
  }

  result.residuals = res;
  result.status = converged ? AdmmStatus::Converged : AdmmStatus::IterLimit;
  result.iterations = st.iter - first_iter;
  result.primal_obj = p.C.cwiseProduct(st.X).sum();
  const DualObjective d = dual_objective(p, st.y, st.S, st.v);
  result.dual_obj = d.value;
  result.dual_clamped = d.clamped;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace

}  // namespace gpbound
