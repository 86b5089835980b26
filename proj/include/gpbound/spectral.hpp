#pragma once

#include <Eigen/Dense>

namespace gpbound {

// M = plus + minus with plus psd, minus nsd and <plus, minus> = 0 (both come
// from one symmetric eigendecomposition of M).
struct PsdSplit {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

PsdSplit psd_split(const Eigen::MatrixXd& M);

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M);

// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& M);

double lambda_max(const Eigen::MatrixXd& M);

// V with V V^T = P_psd(M); columns for clamped eigenvalues are dropped.
Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& M);

}  // namespace gpbound
