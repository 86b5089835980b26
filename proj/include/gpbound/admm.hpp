#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gpbound/sdp_problem.hpp"

namespace gpbound {

// Iterates of the extended ADMM on the dual problem
//   max b^T y + F1(S) + F2(v)  s.t.  A^* y + B^* ybar + S + Z = C,  ybar = v,  Z psd,
// with primal multipliers (X, s).
struct AdmmState {
  Eigen::MatrixXd X;
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  Eigen::VectorXd ybar;
  Eigen::MatrixXd Z;
  Eigen::MatrixXd S;
  Eigen::VectorXd v;
  double sigma = 1.0;
  int iter = 0;

  // X = Z = S = 0 and all vectors zero.
  static AdmmState zeros(const SdpProblem& p, double sigma);

  // Warm start for a problem that has extra inequality rows appended:
  // multipliers of new rows are zero and their slacks start at the
  // projection of B(X).
  AdmmState padded_for(const SdpProblem& p) const;
};

// Normalized infeasibility measures; the solver stops once max() <= tol.
struct ResidualRecord {
  double eps_dc = 0.0;     // dual feasibility
  double eps_pc = 0.0;     // primal feasibility
  double eps_pb = 0.0;     // primal box feasibility
  double eps_opt_m = 0.0;  // box complementarity for (X, S)
  double eps_opt_v = 0.0;  // slack complementarity for (s, v)

  double max() const;
};

// Cholesky factor of Q = [[AA^*, AB^*], [BA^*, BB^* + I]], computed once per
// problem and reused by every y-update.
class NormalFactor {
 public:
  // Throws FactorizationError naming the first dependent row.
  explicit NormalFactor(const SdpProblem& p);

  const Eigen::MatrixXd& matrix() const { return Q_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  Eigen::Index dim() const { return Q_.rows(); }

  // Solves Q w = rhs by a forward then a backward triangular solve.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::MatrixXd Q_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Q assembled from the trace inner products of the stacked constraint rows.
Eigen::MatrixXd normal_matrix(const SdpProblem& p);

// Right-hand side of the y-update linear system.
Eigen::VectorXd y_update_rhs(const AdmmState& st, const SdpProblem& p);

struct MultiplierBlock {
  Eigen::VectorXd y;
  Eigen::VectorXd ybar;
};
MultiplierBlock update_y(const AdmmState& st, const NormalFactor& factor, const SdpProblem& p);

// S = P_[L,U](sigma M) / sigma - M with M = A^* y + B^* ybar + Z + X / sigma - C.
Eigen::MatrixXd update_S(const AdmmState& st, const SdpProblem& p);
Eigen::MatrixXd box_dual_step(const Bounds& box, const Eigen::MatrixXd& M, double sigma);

struct ConeStep {
  Eigen::MatrixXd Z;  // -P_nsd(N)
  Eigen::MatrixXd X;  // sigma * P_psd(N)
};
// N = A^* y + B^* ybar + S + X / sigma - C.
ConeStep cone_step(const Eigen::MatrixXd& N, double sigma);
Eigen::MatrixXd cone_argument(const AdmmState& st, const SdpProblem& p);

// v-update and slack update; both read the previous slack s.
Eigen::VectorXd update_v(const Bounds& slack_bounds, const Eigen::VectorXd& ybar,
                         const Eigen::VectorXd& s, double sigma);
Eigen::VectorXd update_s(const Bounds& slack_bounds, const Eigen::VectorXd& ybar,
                         const Eigen::VectorXd& s, double sigma);

struct ZvBlock {
  Eigen::MatrixXd Z;
  Eigen::VectorXd v;
};
ZvBlock update_Z_v(const AdmmState& st, const SdpProblem& p);

struct PrimalBlock {
  Eigen::MatrixXd X;
  Eigen::VectorXd s;
};
PrimalBlock update_primal(const AdmmState& st, const SdpProblem& p);

ResidualRecord residuals(const AdmmState& st, const SdpProblem& p);

enum class StepRule {
  Auto,      // Adaptive without general inequality rows, Classic otherwise
  Adaptive,  // sigma = ||X|| / ||Z||
  Classic,   // balance primal against dual infeasibility
  Fixed,
};

StepRule resolve_rule(StepRule rule, const SdpProblem& p);

struct AdmmParams {
  double eps_tol = 1e-5;
  int max_iter = 20000;
  double sigma0 = 1.0;
  StepRule rule = StepRule::Auto;
  double c_ratio = 5.0;
  double tau = 1.1;
  int classic_every = 10;
  double sigma_min = 1e-6;
  double sigma_max = 1e6;
  // CSV iteration trace every `trace_every` iterations when trace != nullptr.
  int trace_every = 0;
  std::ostream* trace = nullptr;
  bool record_history = false;
  // Solve with every inequality row scaled to unit norm; the returned state
  // is mapped back to the original rows.
  bool equilibrate = true;
};

// Returns the stepsize for the next iteration.
double adapt_sigma(const AdmmState& st, const ResidualRecord& res, StepRule rule,
                   const AdmmParams& params);

// b^T y + F1(S) + F2(v). Entries of S or v whose sign pairs them with a
// missing bound are dropped (clamped to zero); their magnitude is reported.
struct DualObjective {
  double value = 0.0;
  double clamped = 0.0;  // sum of |entries| removed by the clamp
};
DualObjective dual_objective(const SdpProblem& p, const Eigen::VectorXd& y,
                             const Eigen::MatrixXd& S, const Eigen::VectorXd& v);

// Entrywise sign clamp used by dual_objective and the certificates.
Eigen::MatrixXd clamp_box_dual(const Bounds& box, const Eigen::MatrixXd& S, double* removed);
Eigen::VectorXd clamp_slack_dual(const Bounds& bounds, const Eigen::VectorXd& v, double* removed);

enum class AdmmStatus { Converged, IterLimit };

struct AdmmResult {
  AdmmState state;
  ResidualRecord residuals;
  AdmmStatus status = AdmmStatus::IterLimit;
  double dual_obj = 0.0;
  double dual_clamped = 0.0;
  double primal_obj = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::vector<double> history;  // max residual per iteration, when recorded
};

inline constexpr const char* kTraceHeader =
    "iter,eps_dc,eps_pc,eps_pb,eps_opt_m,eps_opt_v,sigma,primal_obj,dual_obj";

// Residuals in the result refer to the equilibrated rows when
// params.equilibrate is set. Throws FactorizationError for dependent rows and SolverDiverged when an
// iterate becomes non-finite.
AdmmResult solve(const SdpProblem& p, const AdmmParams& params,
                 std::optional<AdmmState> warm_start = std::nullopt);

}  // namespace gpbound
