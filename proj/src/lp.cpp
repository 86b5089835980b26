#include "gpbound/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "gpbound/errors.hpp"

namespace gpbound {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;

enum class Place { Basic, AtLower, AtUpper, Zero };

// Bounded-variable revised simplex on  min cost^T x, [Af | I] x = rhs, with a
// dense explicit basis inverse. Columns N..N+m-1 are the artificials.
class Simplex {
 public:
  Simplex(const Eigen::MatrixXd& Af, const Eigen::VectorXd& rhs, std::vector<double> lo,
          std::vector<double> hi, const LpOptions& opt)
      : Af_(Af), rhs_(rhs), lo_(std::move(lo)), hi_(std::move(hi)), opt_(opt) {
    m_ = static_cast<int>(Af.rows());
    nv_ = static_cast<int>(Af.cols());
    const int total = nv_ + m_;
    x_.assign(total, 0.0);
    place_.assign(total, Place::Zero);
    for (int j = 0; j < nv_; ++j) rest_at_bound(j);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = nv_ + i;
      place_[nv_ + i] = Place::Basic;
    }
    Binv_ = Eigen::MatrixXd::Identity(m_, m_);
  }

  // Nonbasic start values; rhs must already be adjusted so that the
  // artificials start nonnegative.
  void start_artificials() {
    for (int i = 0; i < m_; ++i) x_[nv_ + i] = rhs_(i) - row_activity(i);
  }

  double row_activity(int i) const {
    double s = 0.0;
    for (int j = 0; j < nv_; ++j) s += Af_(i, j) * x_[j];
    return s;
  }

  const std::vector<double>& x() const { return x_; }
  std::vector<double>& lo() { return lo_; }
  std::vector<double>& hi() { return hi_; }
  int iterations() const { return iter_; }
  const std::vector<int>& basis() const { return basis_; }
  bool is_basic(int j) const { return place_[j] == Place::Basic; }

  void set_artificials_fixed() {
    for (int i = 0; i < m_; ++i) {
      const int j = nv_ + i;
      hi_[j] = 0.0;
      if (place_[j] != Place::Basic) {
        x_[j] = 0.0;
        place_[j] = Place::AtLower;
      }
    }
  }

  // Pivots basic artificials out on any usable structural column; rows where
  // none exists are redundant and keep their artificial fixed at zero.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < nv_) continue;
      const Eigen::RowVectorXd row = Binv_.row(r) * Af_;
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < nv_; ++j) {
        if (place_[j] == Place::Basic) continue;
        if (std::abs(row(j)) > best_abs) {
          best_abs = std::abs(row(j));
          best = j;
        }
      }
      if (best < 0) continue;
      const Eigen::VectorXd alpha = Binv_ * column(best);
      const int leaving = basis_[r];
      x_[leaving] = 0.0;
      place_[leaving] = Place::AtLower;
      pivot(r, best, alpha);
    }
    refactor();
  }

  // Returns Optimal, Unbounded or IterationLimit.
  LpStatus run(const Eigen::VectorXd& cost) {
    int degenerate = 0;
    int since_refactor = 0;
    refactor();
    while (true) {
      if (iter_ >= opt_.max_iter) return LpStatus::IterationLimit;
      if (since_refactor >= opt_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
      const Eigen::VectorXd pi = duals(cost);
      const Eigen::VectorXd d = reduced_costs(cost, pi);
      const double tol = opt_.opt_tol * (1.0 + cost.cwiseAbs().maxCoeff());
      const bool bland = degenerate >= opt_.degenerate_switch;

      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < nv_ + m_; ++j) {
        if (place_[j] == Place::Basic || lo_[j] == hi_[j]) continue;
        int want = 0;
        if (place_[j] == Place::AtLower && d(j) < -tol) want = 1;
        else if (place_[j] == Place::AtUpper && d(j) > tol) want = -1;
        else if (place_[j] == Place::Zero && std::abs(d(j)) > tol) want = d(j) < 0 ? 1 : -1;
        if (want == 0) continue;
        if (bland) {
          q = j;
          dir = want;
          break;
        }
        if (std::abs(d(j)) > best) {
          best = std::abs(d(j));
          q = j;
          dir = want;
        }
      }
      if (q < 0) return LpStatus::Optimal;

      const Eigen::VectorXd alpha = Binv_ * column(q);
      double t = kInf;
      int leave_row = -1;
      double leave_abs = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha(i) * dir;
        const int bi = basis_[i];
        double ratio;
        if (a > kPivotTol && lo_[bi] > -kInf) {
          ratio = std::max(0.0, (x_[bi] - lo_[bi]) / a);
        } else if (a < -kPivotTol && hi_[bi] < kInf) {
          ratio = std::max(0.0, (hi_[bi] - x_[bi]) / -a);
        } else {
          continue;
        }
        const bool tie = leave_row >= 0 && std::abs(ratio - t) <= 1e-12 * (1.0 + t);
        bool take;
        if (tie) {
          take = bland ? bi < basis_[leave_row] : std::abs(a) > leave_abs;
        } else {
          take = ratio < t;
        }
        if (take) {
          t = ratio;
          leave_row = i;
          leave_abs = std::abs(a);
        }
      }
      const double flip = (lo_[q] > -kInf && hi_[q] < kInf) ? hi_[q] - lo_[q] : kInf;
      if (t == kInf && flip == kInf) return LpStatus::Unbounded;

      ++iter_;
      ++since_refactor;
      if (flip <= t) {
        move_entering(q, dir, flip, alpha);
        place_[q] = dir > 0 ? Place::AtUpper : Place::AtLower;
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate = 0;
        continue;
      }
      degenerate = t <= 1e-12 ? degenerate + 1 : 0;
      move_entering(q, dir, t, alpha);
      const int leaving = basis_[leave_row];
      const bool to_lower = alpha(leave_row) * dir > 0;
      x_[leaving] = to_lower ? lo_[leaving] : hi_[leaving];
      place_[leaving] = to_lower ? Place::AtLower : Place::AtUpper;
      pivot(leave_row, q, alpha);
    }
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cB(m_);
    for (int i = 0; i < m_; ++i) cB(i) = cost(basis_[i]);
    return Binv_.transpose() * cB;
  }

  Eigen::VectorXd reduced_costs(const Eigen::VectorXd& cost, const Eigen::VectorXd& pi) const {
    Eigen::VectorXd d(nv_ + m_);
    d.head(nv_) = cost.head(nv_) - Af_.transpose() * pi;
    d.tail(m_) = cost.tail(m_) - pi;
    return d;
  }

  void refactor() {
    Eigen::MatrixXd B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = column(basis_[i]);
    Binv_ = B.partialPivLu().inverse();
    Eigen::VectorXd r = rhs_;
    for (int j = 0; j < nv_ + m_; ++j) {
      if (place_[j] == Place::Basic || x_[j] == 0.0) continue;
      r -= column(j) * x_[j];
    }
    const Eigen::VectorXd xb = Binv_ * r;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb(i);
  }

 private:
  Eigen::VectorXd column(int j) const {
    if (j < nv_) return Af_.col(j);
    return Eigen::VectorXd::Unit(m_, j - nv_);
  }

  void rest_at_bound(int j) {
    if (lo_[j] > -kInf) {
      x_[j] = lo_[j];
      place_[j] = Place::AtLower;
    } else if (hi_[j] < kInf) {
      x_[j] = hi_[j];
      place_[j] = Place::AtUpper;
    } else {
      x_[j] = 0.0;
      place_[j] = Place::Zero;
    }
  }

  void move_entering(int q, int dir, double t, const Eigen::VectorXd& alpha) {
    if (t == 0.0) return;
    x_[q] += dir * t;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * t * alpha(i);
  }

  void pivot(int r, int q, const Eigen::VectorXd& alpha) {
    const double piv = alpha(r);
    Binv_.row(r) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i != r && alpha(i) != 0.0) Binv_.row(i) -= alpha(i) * Binv_.row(r);
    }
    basis_[r] = q;
    place_[q] = Place::Basic;
  }

  const Eigen::MatrixXd& Af_;
  Eigen::VectorXd rhs_;
  std::vector<double> lo_, hi_;
  LpOptions opt_;
  int m_ = 0;
  int nv_ = 0;
  int iter_ = 0;
  std::vector<double> x_;
  std::vector<Place> place_;
  std::vector<int> basis_;
  Eigen::MatrixXd Binv_;
};

}  // namespace

LpResult solve_dense_lp(const LpProblem& lp, const LpOptions& opt) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index nv = lp.A.cols();
  if (lp.b.size() != m || lp.c.size() != nv || lp.bounds.size() != nv) {
    throw InvalidInput("LP data has inconsistent dimensions");
  }
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw InvalidInput("LP data must be finite");
  }
  const double sense = lp.maximize ? -1.0 : 1.0;
  const Eigen::VectorXd c = sense * lp.c;

  std::vector<double> lo(nv + m, 0.0), hi(nv + m, kInf);
  for (Eigen::Index j = 0; j < nv; ++j) {
    lo[j] = lp.bounds.has_lower(j) ? lp.bounds.lower(j) : -kInf;
    hi[j] = lp.bounds.has_upper(j) ? lp.bounds.upper(j) : kInf;
    if (lo[j] > hi[j]) {
      LpResult r;
      r.status = LpStatus::Infeasible;
      return r;
    }
  }

  // Flip rows so every artificial starts nonnegative at the initial point.
  Eigen::VectorXd x0(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    x0(j) = lo[j] > -kInf ? lo[j] : (hi[j] < kInf ? hi[j] : 0.0);
  }
  const Eigen::VectorXd resid = lp.b - lp.A * x0;
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i)
    if (resid(i) < 0.0) flip(i) = -1.0;
  const Eigen::MatrixXd Af = flip.asDiagonal() * lp.A;
  const Eigen::VectorXd bf = flip.cwiseProduct(lp.b);

  Simplex sx(Af, bf, lo, hi, opt);
  sx.start_artificials();

  LpResult out;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(nv + m);
  phase1.tail(m).setOnes();
  LpStatus st = sx.run(phase1);
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) infeas += std::abs(sx.x()[nv + i]);
  const double scale = 1.0 + (m > 0 ? lp.b.cwiseAbs().maxCoeff() : 0.0);
  if (st == LpStatus::IterationLimit) {
    out.status = st;
    out.iterations = sx.iterations();
    return out;
  }
  if (infeas > 1e-7 * scale) {
    out.status = LpStatus::Infeasible;
    out.iterations = sx.iterations();
    return out;
  }
  sx.set_artificials_fixed();
  sx.drive_out_artificials();

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(nv + m);
  cost.head(nv) = c;
  st = sx.run(cost);
  sx.refactor();
  out.status = st;
  out.iterations = sx.iterations();

  out.x.resize(nv);
  for (Eigen::Index j = 0; j < nv; ++j) out.x(j) = sx.x()[j];
  const Eigen::VectorXd pi = sx.duals(cost);
  Eigen::VectorXd d = sx.reduced_costs(cost, pi).head(nv);
  for (Eigen::Index j = 0; j < nv; ++j)
    if (sx.is_basic(static_cast<int>(j))) d(j) = 0.0;

  // Lagrangian value at pi: valid for any pi by weak duality.
  const double drop = opt.opt_tol * (1.0 + c.cwiseAbs().maxCoeff());
  double bound = bf.dot(pi);
  for (Eigen::Index j = 0; j < nv && std::isfinite(bound); ++j) {
    if (d(j) > 0.0) {
      if (lo[j] > -kInf) bound += d(j) * lo[j];
      else if (d(j) > drop) bound = -kInf;
    } else if (d(j) < 0.0) {
      if (hi[j] < kInf) bound += d(j) * hi[j];
      else if (d(j) < -drop) bound = -kInf;
    }
  }
  const double obj = c.dot(out.x);

  out.objective = sense * obj;
  out.duals = sense * flip.cwiseProduct(pi);
  out.reduced = sense * d;
  out.dual_bound = sense * bound;
  out.primal_residual =
      m > 0 ? (lp.A * out.x - lp.b).cwiseAbs().maxCoeff() / scale : 0.0;
  out.cs_residual = std::isfinite(bound) ? std::abs(obj - bound) / (1.0 + std::abs(obj)) : kInf;
  out.certified = st == LpStatus::Optimal && out.cs_residual <= kLpCertifyTol &&
                  out.primal_residual <= kLpCertifyTol;
  return out;
}

}  // namespace gpbound
