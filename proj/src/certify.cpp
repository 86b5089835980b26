#include "gpbound/certify.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "gpbound/csv.hpp"
#include "gpbound/errors.hpp"
#include "gpbound/spectral.hpp"

namespace gpbound {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::string to_string(BoundMethod m) {
  return m == BoundMethod::EigBound ? "EigBound" : "LpBound";
}

double xbar_for(const SdpProblem& p, const Eigen::MatrixXd& X, double mu) {
  if (p.tag.problem == ProblemKind::KEquipartition) return p.tag.m;
  if (!(mu > 1.0)) throw InvalidInput("xbar scaling mu must exceed 1");
  return mu * lambda_max(X);
}

BoundCertificate eig_lower_bound(const SdpProblem& p, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& v, const Eigen::MatrixXd& S,
                                 const Eigen::MatrixXd& Z, double xbar) {
  if (!(xbar > 0.0)) throw InvalidInput("xbar must be positive");
  const DualObjective d0 = dual_objective(p, y, S, v);
  const Eigen::VectorXd lam = sym_eigenvalues(Z);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) < 0.0) neg += lam(i);

  BoundCertificate cert;
  cert.method = BoundMethod::EigBound;
  cert.perturbation = xbar * neg;
  cert.xbar = xbar;
  cert.value = d0.value + cert.perturbation;
  cert.clamped = d0.clamped;
  return cert;
}

BoundCertificate eig_certificate(const SdpProblem& p, const AdmmState& st, double xbar) {
  const Eigen::MatrixXd S = clamp_box_dual(p.box, st.S, nullptr);
  const Eigen::VectorXd v = clamp_slack_dual(p.ineq_bounds, st.v, nullptr);
  const Eigen::MatrixXd Z = p.C - p.adjoint(st.y, v) - S;
  BoundCertificate cert = eig_lower_bound(p, st.y, v, S, Z, xbar);
  // Report the clamp against the raw iterate, not the already clamped copy.
  cert.clamped = dual_objective(p, st.y, st.S, st.v).clamped;
  return cert;
}

LpProblem bound_lp(const SdpProblem& p, const Eigen::MatrixXd& Z) {
  const int n = p.n;
  const int nx = n * (n + 1) / 2;
  const int q = p.num_ineq();
  const int m = p.num_eq();
  // Column of entry (i, j), i <= j, in row-major upper-triangle order.
  auto col = [n](int i, int j) { return i * n - i * (i - 1) / 2 + (j - i); };

  LpProblem lp;
  lp.A = Eigen::MatrixXd::Zero(m + q, nx + q);
  lp.b = Eigen::VectorXd::Zero(m + q);
  lp.c = Eigen::VectorXd::Zero(nx + q);
  lp.bounds = Bounds::free(nx + q);

  const Eigen::MatrixXd R = p.C - Z;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int c = col(i, j);
      lp.c(c) = i == j ? R(i, i) : R(i, j) + R(j, i);
      const Eigen::Index idx = i + static_cast<Eigen::Index>(j) * n;
      lp.bounds.set(c, p.box.has_lower(idx) ? std::optional<double>(p.box.lower(idx)) : std::nullopt,
                    p.box.has_upper(idx) ? std::optional<double>(p.box.upper(idx)) : std::nullopt);
    }
  }
  auto fill_row = [&](int r, const SymSparse& row) {
    for (const auto& e : row.entries()) {
      lp.A(r, col(e.i, e.j)) += e.i == e.j ? e.value : 2.0 * e.value;
    }
  };
  for (int r = 0; r < m; ++r) {
    fill_row(r, p.eq_rows[r]);
    lp.b(r) = p.b(r);
  }
  for (int r = 0; r < q; ++r) {
    fill_row(m + r, p.ineq_rows[r]);
    lp.A(m + r, nx + r) = -1.0;
    const Bounds& bd = p.ineq_bounds;
    lp.bounds.set(nx + r, bd.has_lower(r) ? std::optional<double>(bd.lower(r)) : std::nullopt,
                  bd.has_upper(r) ? std::optional<double>(bd.upper(r)) : std::nullopt);
  }
  return lp;
}

BoundCertificate lp_lower_bound(const SdpProblem& p, const Eigen::MatrixXd& Z, bool project,
                                const LpOptions& opt) {
  const Eigen::MatrixXd Zt = project ? project_psd(Z) : Z;
  const LpResult res = solve_dense_lp(bound_lp(p, Zt), opt);
  BoundCertificate cert;
  cert.method = BoundMethod::LpBound;
  cert.lp_status = res.status;
  cert.feasible = res.status == LpStatus::Optimal;
  cert.value = cert.feasible ? res.dual_bound : kNegInf;
  return cert;
}

CertifyRoute certify_route_from_string(const std::string& s) {
  if (s == "auto") return CertifyRoute::Auto;
  if (s == "eig") return CertifyRoute::Eig;
  if (s == "lp") return CertifyRoute::Lp;
  throw InvalidInput("unknown certificate method '" + s + "' (expected auto, eig or lp)");
}

BoundCertificate certify(const SdpProblem& p, const AdmmResult& r, CertifyRoute route,
                         double mu) {
  const bool keq = p.tag.problem == ProblemKind::KEquipartition;
  const bool trusted = keq || r.residuals.max() <= kXbarTrustTol;
  auto eig = [&]() {
    if (!trusted) {
      BoundCertificate refused;
      refused.value = kNegInf;
      refused.feasible = false;
      return refused;
    }
    return eig_certificate(p, r.state, xbar_for(p, r.state.X, mu));
  };
  switch (route) {
    case CertifyRoute::Eig: return eig();
    case CertifyRoute::Lp: return lp_lower_bound(p, r.state.Z);
    case CertifyRoute::Auto: break;
  }
  if (keq) return eig();
  BoundCertificate lp = lp_lower_bound(p, r.state.Z);
  if (std::isfinite(lp.value) || !trusted) return lp;
  return eig();
}

void write_certificate_row(std::ostream& out, const std::string& instance, Relaxation relax,
                           const BoundCertificate& cert, bool converged) {
  out << instance << ',' << to_string(relax) << ',' << to_string(cert.method) << ','
      << format_double(cert.value) << ',';
  if (cert.method == BoundMethod::EigBound) {
    out << format_double(cert.perturbation) << ',' << format_double(cert.xbar);
  } else {
    out << ',';
  }
  out << ',' << (converged ? 1 : 0) << '\n';
}

}  // namespace gpbound
