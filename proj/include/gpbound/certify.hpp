#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "gpbound/admm.hpp"
#include "gpbound/lp.hpp"
#include "gpbound/sdp_problem.hpp"

namespace gpbound {

enum class BoundMethod { EigBound, LpBound };

std::string to_string(BoundMethod m);

struct BoundCertificate {
  double value = 0.0;  // -inf when no bound could be certified
  BoundMethod method = BoundMethod::EigBound;
  double perturbation = 0.0;  // EigBound only
  double xbar = 0.0;          // EigBound only
  bool feasible = true;       // false when the LP was not solved to optimality
  double clamped = 0.0;       // mass of sign-violating multipliers dropped
  LpStatus lp_status = LpStatus::Optimal;
};

inline constexpr double kDefaultMu = 1.1;
// GPKC EigBound trusts lambda_max of the iterate only at this accuracy.
inline constexpr double kXbarTrustTol = 1e-5;

// m for k-equipartition problems, mu * lambda_max(X) otherwise (mu > 1).
double xbar_for(const SdpProblem& p, const Eigen::MatrixXd& X, double mu = kDefaultMu);

// d0 + xbar * (sum of negative eigenvalues of Z), d0 = b^T y + F1(S) + F2(v)
// after the sign clamp.
BoundCertificate eig_lower_bound(const SdpProblem& p, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& v, const Eigen::MatrixXd& S,
                                 const Eigen::MatrixXd& Z, double xbar);

// eig_lower_bound with Z = C - A^* y - B^* v - S, using the clamped v and S,
// so that (y, v, S, Z) satisfies the dual equation exactly.
BoundCertificate eig_certificate(const SdpProblem& p, const AdmmState& st, double xbar);

// The LP minimizing <C - Z, X> over the polyhedral part of the problem,
// written over the upper triangle of X followed by one slack per
// inequality row. Its dual is the multiplier LP for a fixed Z.
LpProblem bound_lp(const SdpProblem& p, const Eigen::MatrixXd& Z);

// Z is projected onto the psd cone first unless `project` is false.
BoundCertificate lp_lower_bound(const SdpProblem& p, const Eigen::MatrixXd& Z,
                                bool project = true, const LpOptions& opt = {});

enum class CertifyRoute { Auto, Eig, Lp };

CertifyRoute certify_route_from_string(const std::string& s);

// Auto: EigBound for k-equipartition, LpBound otherwise. For GPKC, when
// the LP gives no finite bound and the run converged to kXbarTrustTol, the
// EigBound with xbar = mu * lambda_max(X) is used instead. A GPKC EigBound
// from a run that did not reach that accuracy is refused (value -inf).
BoundCertificate certify(const SdpProblem& p, const AdmmResult& r,
                         CertifyRoute route = CertifyRoute::Auto, double mu = kDefaultMu);

inline constexpr const char* kCertificateCsvHeader =
    "instance,relaxation,method,bound,perturbation,xbar,converged";

void write_certificate_row(std::ostream& out, const std::string& instance,
                           Relaxation relax, const BoundCertificate& cert, bool converged);

}  // namespace gpbound
