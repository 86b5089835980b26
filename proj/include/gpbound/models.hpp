#pragma once

#include <vector>

#include "gpbound/graph.hpp"
#include "gpbound/sdp_problem.hpp"

namespace gpbound {

// min 1/2 <L, X>  s.t.  diag(X) = e,  X e = m e,  X psd.
SdpProblem build_keq_sdp(const GraphInstance& g, int k);
// As build_keq_sdp plus X >= 0.
SdpProblem build_keq_dnn(const GraphInstance& g, int k);

// min 1/2 <L, X>  s.t.  diag(X) = e,  X a <= W e,  X psd.
SdpProblem build_gpkc_sdp(const GraphInstance& g, const Gpkc& spec);
// As build_gpkc_sdp plus X >= 0; the slack rows then also get the valid lower
// bound (X a)_i >= a_i.
SdpProblem build_gpkc_dnn(const GraphInstance& g, const Gpkc& spec);

// Dispatches on the spec type.
SdpProblem build_relaxation(const GraphInstance& g, const PartitionSpec& spec,
                            Relaxation relax);

// X_ij + X_ir - X_jr <= 1. The inequality is symmetric in (j, r), so cuts are
// stored with j < r; i is the apex.
struct TriangleCut {
  int i;
  int j;
  int r;
  double violation;
};

inline constexpr double kMetViolationTol = 1e-4;

// Up to max_cuts triangle inequalities violated by more than `tol`, most
// violated first (ties broken by (i, j, r)).
std::vector<TriangleCut> separate_met(const Eigen::MatrixXd& X, int max_cuts,
                                      double tol = kMetViolationTol);

// Appends each cut as an inequality row with u = 1 and no lower bound.
// Throws InvalidInput if a triple is already present.
SdpProblem add_cuts(const SdpProblem& p, const std::vector<TriangleCut>& cuts);

SymSparse triangle_row(int i, int j, int r);

}  // namespace gpbound
