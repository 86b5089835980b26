#include "gpbound/spectral.hpp"

namespace gpbound {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& M) {
  // Only the lower triangle is read; symmetrize first so rounding asymmetry
  // in callers cannot leak into the result.
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym);
}

}  // namespace

PsdSplit psd_split(const Eigen::MatrixXd& M) {
  const auto es = decompose(M);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::Index n = lam.size();
  Eigen::Index npos = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lam(i) > 0.0) ++npos;
  const Eigen::Index nneg = n - npos;  // ascending: negatives come first

  PsdSplit out;
  // Build each part from its own eigenvectors: computing one as M - other
  // would break the exact orthogonality of the two.
  if (npos > 0) {
    const auto Vp = V.rightCols(npos);
    out.plus = Vp * lam.tail(npos).asDiagonal() * Vp.transpose();
  } else {
    out.plus = Eigen::MatrixXd::Zero(n, n);
  }
  if (nneg > 0) {
    const auto Vn = V.leftCols(nneg);
    out.minus = Vn * lam.head(nneg).asDiagonal() * Vn.transpose();
  } else {
    out.minus = Eigen::MatrixXd::Zero(n, n);
  }
  return out;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) { return psd_split(M).plus; }

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& M) {
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

double lambda_max(const Eigen::MatrixXd& M) { return sym_eigenvalues(M).maxCoeff(); }

Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& M) {
  const auto es = decompose(M);
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::Index npos = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0.0) ++npos;
  return es.eigenvectors().rightCols(npos) *
         lam.tail(npos).cwiseSqrt().asDiagonal();
}

}  // namespace gpbound
