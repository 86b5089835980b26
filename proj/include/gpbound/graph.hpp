#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gpbound {

// Weighted undirected graph. The weight matrix is symmetric, nonnegative and
// has an exactly zero diagonal; construction validates this.
class GraphInstance {
 public:
  GraphInstance(Eigen::MatrixXd weights, std::string name = {});

  int n() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  int num_edges() const;
  double total_weight() const;

  bool operator==(const GraphInstance& other) const {
    return weights_ == other.weights_ && name_ == other.name_;
  }

 private:
  Eigen::MatrixXd weights_;
  std::string name_;
};

struct KEquipartition {
  int k = 2;
  int m = 1;  // group size n / k
};

struct Gpkc {
  Eigen::VectorXd a;  // vertex weights
  double W = 0.0;     // capacity per group

  bool operator==(const Gpkc& o) const { return a == o.a && W == o.W; }
};

using PartitionSpec = std::variant<KEquipartition, Gpkc>;

// Builds a k-equipartition spec; throws InvalidInput unless k >= 2 and k | n.
KEquipartition make_keq(int n, int k);

// Throws InvalidInput for malformed specs and InfeasibleSpec when some a_i > W.
void validate_spec(const PartitionSpec& spec, int n);

// Assignment of vertices to groups 0..num_groups()-1; every label in that
// range is used by at least one vertex.
class Partition {
 public:
  Partition() = default;
  // Relabels so that groups are numbered in order of first appearance.
  explicit Partition(std::vector<int> assignment);
  static Partition from_groups(const std::vector<std::vector<int>>& groups, int n);

  int n() const { return static_cast<int>(assignment_.size()); }
  int num_groups() const { return num_groups_; }
  int group_of(int v) const { return assignment_[v]; }
  const std::vector<int>& assignment() const { return assignment_; }
  std::vector<std::vector<int>> groups() const;

  bool operator==(const Partition& o) const { return assignment_ == o.assignment_; }

 private:
  std::vector<int> assignment_;
  int num_groups_ = 0;
};

// Diag(W e) - W.
Eigen::MatrixXd laplacian(const GraphInstance& g);

// 1/2 <L, Y Y^T> with Y the 0/1 group indicator matrix.
double cut_value(const GraphInstance& g, const Partition& p);
// Sum of weights of edges whose endpoints are in different groups.
double cut_value_edge_scan(const GraphInstance& g, const Partition& p);

// Y Y^T: 1 where i and j share a group.
Eigen::MatrixXd comembership_matrix(const Partition& p);

// Returns a description of the first violated invariant, or nullopt.
std::optional<std::string> partition_violation(const Partition& p,
                                               const PartitionSpec& spec);
inline bool is_feasible(const Partition& p, const PartitionSpec& spec) {
  return !partition_violation(p, spec).has_value();
}

std::vector<double> group_weights(const Partition& p, const Eigen::VectorXd& a);

// Each edge present independently with probability `density`, integer weight
// uniform over {1, ..., 100}.
GraphInstance gen_rand_graph(int n, double density, std::uint64_t seed);

struct GpkcInstance {
  GraphInstance graph;
  Gpkc spec;
  // Maximum group weight of the reference equipartition under each of the
  // permuted weightings; W is their 10th percentile.
  std::vector<double> permuted_maxima;
};

inline constexpr int kGpkcPermutations = 1000;

// Graph as gen_rand_graph, vertex weights uniform over {1, ..., 1000}, and a
// capacity W such that about 10% of permuted weightings of a fixed
// k-equipartition are feasible.
GpkcInstance gen_gpkc_instance(int n, double density, int k, std::uint64_t seed);

std::string rand_instance_name(int n, double density, std::uint64_t seed);
std::string gpkc_instance_name(int n, double density, std::uint64_t seed);

// Complete graph with unit weights.
GraphInstance complete_graph(int n);

}  // namespace gpbound
