#pragma once

#include <cstdint>

#include "gpbound/graph.hpp"

namespace gpbound {

struct OracleResult {
  double opt = 0.0;
  Partition argmin;
  std::uint64_t enumerated = 0;  // feasible partitions visited
};

inline constexpr double kOracleCap = 1e6;

// n! / (m!^k k!), as a double.
double equipartition_count(int n, int k);
// Bell(n), as a double.
double bell_number(int n);

// Each unordered equipartition once: the group holding the smallest unused
// vertex is completed first. Throws EnumerationTooLarge above kOracleCap.
OracleResult brute_force_keq(const GraphInstance& g, int k);

// All set partitions as restricted-growth strings, pruned by capacity.
// Throws EnumerationTooLarge when Bell(n) > kOracleCap and InfeasibleSpec
// when no partition fits.
OracleResult brute_force_gpkc(const GraphInstance& g, const Eigen::VectorXd& a, double W);

OracleResult brute_force(const GraphInstance& g, const PartitionSpec& spec);

}  // namespace gpbound
