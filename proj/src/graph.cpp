#include "gpbound/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gpbound/errors.hpp"
#include "gpbound/rng.hpp"

namespace gpbound {

GraphInstance::GraphInstance(Eigen::MatrixXd weights, std::string name)
    : weights_(std::move(weights)), name_(std::move(name)) {
  const auto n = weights_.rows();
  if (n != weights_.cols()) throw InvalidInput("weight matrix must be square");
  if (n < 2) throw InvalidInput("graph needs at least 2 vertices");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw InvalidInput("nonzero diagonal weight at vertex " + std::to_string(i + 1));
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidInput("negative or non-finite weight on edge (" +
                           std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      if (w != weights_(j, i)) {
        throw InvalidInput("asymmetric weight on edge (" + std::to_string(i + 1) +
                           "," + std::to_string(j + 1) + ")");
      }
    }
  }
}

int GraphInstance::num_edges() const {
  int count = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (weights_(i, j) != 0.0) ++count;
  return count;
}

double GraphInstance::total_weight() const { return 0.5 * weights_.sum(); }

KEquipartition make_keq(int n, int k) {
  if (k < 2) throw InvalidInput("k-equipartition needs k >= 2");
  if (n % k != 0) {
    throw InvalidInput("k = " + std::to_string(k) + " does not divide n = " +
                       std::to_string(n));
  }
  return KEquipartition{k, n / k};
}

void validate_spec(const PartitionSpec& spec, int n) {
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) {
    if (keq->k < 2 || keq->m < 1 || keq->k * keq->m != n) {
      throw InvalidInput("invalid k-equipartition spec for n = " + std::to_string(n));
    }
    return;
  }
  const auto& gpkc = std::get<Gpkc>(spec);
  if (gpkc.a.size() != n) throw InvalidInput("vertex weight vector has wrong length");
  for (int i = 0; i < n; ++i) {
    if (!(gpkc.a(i) > 0.0)) {
      throw InvalidInput("vertex weight a_" + std::to_string(i + 1) + " must be positive");
    }
    if (gpkc.a(i) > gpkc.W) {
      throw InfeasibleSpec("vertex weight a_" + std::to_string(i + 1) +
                           " exceeds capacity W");
    }
  }
}

Partition::Partition(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  std::vector<int> relabel;
  for (int& label : assignment_) {
    if (label < 0) throw InvalidInput("negative group label");
    if (static_cast<std::size_t>(label) >= relabel.size()) relabel.resize(label + 1, -1);
    if (relabel[label] < 0) relabel[label] = num_groups_++;
    label = relabel[label];
  }
}

Partition Partition::from_groups(const std::vector<std::vector<int>>& groups, int n) {
  std::vector<int> assignment(n, -1);
  for (std::size_t t = 0; t < groups.size(); ++t) {
    for (int v : groups[t]) {
      if (v < 0 || v >= n) throw InvalidInput("vertex index out of range");
      if (assignment[v] >= 0) {
        throw InvalidInput("vertex " + std::to_string(v + 1) + " in two groups");
      }
      assignment[v] = static_cast<int>(t);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (assignment[v] < 0) {
      throw InvalidInput("vertex " + std::to_string(v + 1) + " not covered");
    }
  }
  return Partition(std::move(assignment));
}

std::vector<std::vector<int>> Partition::groups() const {
  std::vector<std::vector<int>> out(num_groups_);
  for (int v = 0; v < n(); ++v) out[assignment_[v]].push_back(v);
  return out;
}

Eigen::MatrixXd laplacian(const GraphInstance& g) {
  Eigen::MatrixXd L = -g.weights();
  L.diagonal() = g.weights().rowwise().sum();
  return L;
}

namespace {

void require_cover(const GraphInstance& g, const Partition& p) {
  if (p.n() != g.n()) throw InvalidInput("partition does not cover the vertex set");
}

}  // namespace

Eigen::MatrixXd comembership_matrix(const Partition& p) {
  const int n = p.n();
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = p.group_of(i) == p.group_of(j) ? 1.0 : 0.0;
  return X;
}

double cut_value(const GraphInstance& g, const Partition& p) {
  require_cover(g, p);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(g.n(), p.num_groups());
  for (int v = 0; v < g.n(); ++v) Y(v, p.group_of(v)) = 1.0;
  // <L, Y Y^T> = trace(Y^T L Y)
  return 0.5 * (Y.transpose() * laplacian(g) * Y).trace();
}

double cut_value_edge_scan(const GraphInstance& g, const Partition& p) {
  require_cover(g, p);
  double total = 0.0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (p.group_of(i) != p.group_of(j)) total += g.weight(i, j);
  return total;
}

std::vector<double> group_weights(const Partition& p, const Eigen::VectorXd& a) {
  std::vector<double> w(p.num_groups(), 0.0);
  for (int v = 0; v < p.n(); ++v) w[p.group_of(v)] += a(v);
  return w;
}

std::optional<std::string> partition_violation(const Partition& p,
                                               const PartitionSpec& spec) {
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) {
    if (p.n() != keq->k * keq->m) return "partition size differs from k*m";
    if (p.num_groups() != keq->k) {
      return "expected " + std::to_string(keq->k) + " groups, got " +
             std::to_string(p.num_groups());
    }
    std::vector<int> sizes(p.num_groups(), 0);
    for (int v = 0; v < p.n(); ++v) ++sizes[p.group_of(v)];
    for (int t = 0; t < p.num_groups(); ++t) {
      if (sizes[t] != keq->m) {
        return "group " + std::to_string(t) + " has size " + std::to_string(sizes[t]);
      }
    }
    return std::nullopt;
  }
  const auto& gpkc = std::get<Gpkc>(spec);
  if (p.n() != gpkc.a.size()) return "partition size differs from weight vector";
  const auto w = group_weights(p, gpkc.a);
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (w[t] > gpkc.W) return "group " + std::to_string(t) + " exceeds capacity";
  }
  return std::nullopt;
}

namespace {

GraphInstance rand_graph_from(Rng& rng, int n, double density, std::string name) {
  if (n < 2) throw InvalidInput("graph needs at least 2 vertices");
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidInput("density must be in [0,1]");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(density)) {
        w(i, j) = w(j, i) = static_cast<double>(rng.uniform_int(1, 100));
      }
    }
  }
  return GraphInstance(std::move(w), std::move(name));
}

int density_percent(double density) { return static_cast<int>(std::lround(density * 100)); }

}  // namespace

std::string rand_instance_name(int n, double density, std::uint64_t seed) {
  return "rand" + std::to_string(density_percent(density)) + "_n" + std::to_string(n) +
         "_s" + std::to_string(seed);
}

std::string gpkc_instance_name(int n, double density, std::uint64_t seed) {
  return "GPKC" + rand_instance_name(n, density, seed);
}

GraphInstance gen_rand_graph(int n, double density, std::uint64_t seed) {
  Rng rng(seed);
  return rand_graph_from(rng, n, density, rand_instance_name(n, density, seed));
}

GpkcInstance gen_gpkc_instance(int n, double density, int k, std::uint64_t seed) {
  const KEquipartition keq = make_keq(n, k);
  Rng rng(seed);
  GraphInstance graph = rand_graph_from(rng, n, density, gpkc_instance_name(n, density, seed));

  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a(i) = static_cast<double>(rng.uniform_int(1, 1000));

  // Reference equipartition: consecutive index blocks. The permuted weights
  // are exchangeable, so the distribution of maxima depends only on (k, m).
  std::vector<double> maxima(kGpkcPermutations);
  for (double& mx : maxima) {
    const std::vector<int> perm = rng.permutation(n);
    mx = 0.0;
    for (int t = 0; t < keq.k; ++t) {
      double w = 0.0;
      for (int i = t * keq.m; i < (t + 1) * keq.m; ++i) w += a(perm[i]);
      mx = std::max(mx, w);
    }
  }

  std::vector<double> sorted = maxima;
  std::sort(sorted.begin(), sorted.end());
  const int target = kGpkcPermutations / 10;
  auto count_le = [&](double w) {
    return static_cast<int>(std::upper_bound(sorted.begin(), sorted.end(), w) - sorted.begin());
  };
  double W = sorted[target - 1];
  int count = count_le(W);
  // Ties can push the feasible count above the target; step down to the next
  // distinct value when that lands closer.
  const auto lower = std::lower_bound(sorted.begin(), sorted.end(), W);
  if (count > target && lower != sorted.begin()) {
    const double below = *(lower - 1);
    if (std::abs(count_le(below) - target) < count - target) W = below;
  }

  return GpkcInstance{std::move(graph), Gpkc{std::move(a), W}, std::move(maxima)};
}

GraphInstance complete_graph(int n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  return GraphInstance(std::move(w), "K" + std::to_string(n));
}

}  // namespace gpbound
