#include "gpbound/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gpbound/errors.hpp"

namespace gpbound {

double equipartition_count(int n, int k) {
  if (k < 1 || n % k != 0) return 0.0;
  const int m = n / k;
  return std::exp(std::lgamma(n + 1.0) - k * std::lgamma(m + 1.0) - std::lgamma(k + 1.0));
}

double bell_number(int n) {
  // Bell triangle.
  std::vector<double> row{1.0};
  for (int i = 1; i <= n; ++i) {
    std::vector<double> next{row.back()};
    for (double x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

namespace {

struct Search {
  explicit Search(const GraphInstance& graph) : g(graph), label(graph.n(), -1) {}

  const GraphInstance& g;
  std::vector<int> label;
  double best_internal = -std::numeric_limits<double>::infinity();
  std::vector<int> best_label;
  std::uint64_t leaves = 0;

  double gain_into(int v, int group, int upto) const {
    double s = 0.0;
    for (int u = 0; u < upto; ++u)
      if (label[u] == group) s += g.weight(u, v);
    return s;
  }

  void leaf(double internal) {
    ++leaves;
    if (internal > best_internal) {
      best_internal = internal;
      best_label = label;
    }
  }
};

// Completes group `t` (already holding `size` members, last one `last`);
// then opens group t+1 at the smallest unused vertex.
void keq_fill(Search& S, int k, int m, int t, int size, int last, double internal) {
  const int n = S.g.n();
  if (size == m) {
    if (t == k - 1) {
      S.leaf(internal);
      return;
    }
    int first = 0;
    while (S.label[first] >= 0) ++first;
    S.label[first] = t + 1;
    keq_fill(S, k, m, t + 1, 1, first, internal + S.gain_into(first, t + 1, n));
    S.label[first] = -1;
    return;
  }
  for (int v = last + 1; v < n; ++v) {
    if (S.label[v] >= 0) continue;
    const double add = S.gain_into(v, t, n);
    S.label[v] = t;
    keq_fill(S, k, m, t, size + 1, v, internal + add);
    S.label[v] = -1;
  }
}

void rgs_fill(Search& S, const Eigen::VectorXd& a, double W, std::vector<double>& load, int v,
              int groups, double internal) {
  const int n = S.g.n();
  if (v == n) {
    S.leaf(internal);
    return;
  }
  for (int c = 0; c <= groups && c < n; ++c) {
    if (c == groups) load.push_back(0.0);
    if (load[c] + a(v) <= W) {
      load[c] += a(v);
      S.label[v] = c;
      rgs_fill(S, a, W, load, v + 1, c == groups ? groups + 1 : groups,
               internal + S.gain_into(v, c, v));
      S.label[v] = -1;
      load[c] -= a(v);
    }
    if (c == groups) load.pop_back();
  }
}

OracleResult finish(const GraphInstance& g, const Search& S) {
  OracleResult r;
  r.argmin = Partition(S.best_label);
  r.opt = cut_value(g, r.argmin);
  r.enumerated = S.leaves;
  return r;
}

}  // namespace

OracleResult brute_force_keq(const GraphInstance& g, int k) {
  const KEquipartition keq = make_keq(g.n(), k);
  const double count = equipartition_count(g.n(), k);
  if (count > kOracleCap) {
    throw EnumerationTooLarge("about " + std::to_string(static_cast<long long>(count)) +
                              " equipartitions exceed the enumeration cap");
  }
  Search S(g);
  S.label[0] = 0;
  keq_fill(S, keq.k, keq.m, 0, 1, 0, 0.0);
  return finish(g, S);
}

OracleResult brute_force_gpkc(const GraphInstance& g, const Eigen::VectorXd& a, double W) {
  validate_spec(Gpkc{a, W}, g.n());
  if (bell_number(g.n()) > kOracleCap) {
    throw EnumerationTooLarge("Bell(" + std::to_string(g.n()) +
                              ") set partitions exceed the enumeration cap");
  }
  Search S(g);
  std::vector<double> load;
  rgs_fill(S, a, W, load, 0, 0, 0.0);
  if (S.leaves == 0) throw InfeasibleSpec("no partition satisfies the capacity");
  return finish(g, S);
}

OracleResult brute_force(const GraphInstance& g, const PartitionSpec& spec) {
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) return brute_force_keq(g, keq->k);
  const auto& gp = std::get<Gpkc>(spec);
  return brute_force_gpkc(g, gp.a, gp.W);
}

}  // namespace gpbound
