#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpbound/graph.hpp"

namespace gpbound {

struct HeuristicResult {
  Partition partition;
  double ub = 0.0;
  int samples_used = 0;
  double elapsed = 0.0;  // seconds
  std::string method;
};

struct RoundingParams {
  int samples = 100;
  double time_limit = 0.0;  // seconds; <= 0 disables the limit
  std::uint64_t seed = 1;
  bool gaussian = false;  // hyperplane rounding only: N(0,1) instead of U(0,1) directions
};

inline constexpr double kGainTol = 1e-9;

// Algorithm names as they appear in CSV output.
enum class HeuristicMethod { Hyp, Vc, HypTwoOpt, VcTwoOpt };
std::string to_string(HeuristicMethod m);
HeuristicMethod heuristic_from_string(const std::string& s);

// (kX - ee^T) / (k - 1).
Eigen::MatrixXd hyperplane_transform(const Eigen::MatrixXd& X, int k);

HeuristicResult hyperplane_round(const GraphInstance& g, const Eigen::MatrixXd& X, int k,
                                 int m, const RoundingParams& params);

// Similarity sim(i, j) = <x_i, x_j> over rows of X.
HeuristicResult vc_round_keq(const GraphInstance& g, const Eigen::MatrixXd& X, int k, int m,
                             const RoundingParams& params);
HeuristicResult vc_round_gpkc(const GraphInstance& g, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& a, double W,
                              const RoundingParams& params);

// Best-gain swaps between two groups while the gain exceeds kGainTol. The
// gain of swapping s in P1 with t in P2 is D_s + D_t - 2 w_st, where D is
// external minus internal weight. With `a` non-empty, only swaps that keep
// both group weights <= W are considered. Returns the number of swaps.
int two_opt_pair(const GraphInstance& g, std::vector<int>& P1, std::vector<int>& P2,
                 const Eigen::VectorXd& a = {}, double W = 0.0);

inline int two_opt_bisection(const GraphInstance& g, std::vector<int>& P1,
                             std::vector<int>& P2) {
  return two_opt_pair(g, P1, P2);
}

// Sweeps over all group pairs in random order, running two_opt_pair on each,
// until a sweep makes no swap or the time limit passes.
Partition two_opt_multi(const GraphInstance& g, const Partition& start,
                        const PartitionSpec& spec, double time_limit, std::uint64_t seed);

// Runs one rounding method on X; the +2opt variants refine its best
// partition with two_opt_multi under the same time budget.
HeuristicResult run_heuristic(const GraphInstance& g, const Eigen::MatrixXd& X,
                              const PartitionSpec& spec, HeuristicMethod method,
                              const RoundingParams& params);

inline constexpr const char* kHeuristicCsvHeader = "instance,method,ub,samples,elapsed_s";

void write_heuristic_row(std::ostream& out, const std::string& instance,
                         const HeuristicResult& r);

}  // namespace gpbound
