#pragma once

#include <vector>

#include "gpbound/admm.hpp"
#include "gpbound/certify.hpp"
#include "gpbound/graph.hpp"
#include "gpbound/models.hpp"

namespace gpbound {

struct CutLoopParams {
  int max_rounds = 10;  // including round 0 (the plain DNN)
  int m_met = 0;        // cuts per round; 0 means 2n
  double violation_tol = kMetViolationTol;
  AdmmParams admm;
  CertifyRoute route = CertifyRoute::Auto;
  double mu = kDefaultMu;
};

struct CutRound {
  int round = 0;
  int cuts_added = 0;    // in this round
  int cuts_total = 0;    // triangle rows in the solved problem
  double certified = 0.0;  // certificate of this round's relaxation
  double lb = 0.0;         // best certified value up to this round
  BoundCertificate cert;
  AdmmStatus status = AdmmStatus::IterLimit;
  int iterations = 0;
  double seconds = 0.0;
  double max_residual = 0.0;
};

struct CutLoopResult {
  std::vector<CutRound> rounds;
  SdpProblem final_problem;
  AdmmResult final_solve;
};

// Round 0 solves the DNN; each later round adds up to m_met new violated
// triangle cuts of the last iterate and re-solves from the previous state.
// Stops after max_rounds rounds or when separation finds nothing new.
CutLoopResult cutting_loop(const GraphInstance& g, const PartitionSpec& spec,
                           const CutLoopParams& params);

}  // namespace gpbound
