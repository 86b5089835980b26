#include "gpbound/rounding.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <numeric>
#include <ostream>
#include <span>

#include "gpbound/csv.hpp"
#include "gpbound/errors.hpp"
#include "gpbound/rng.hpp"
#include "gpbound/spectral.hpp"

namespace gpbound {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool out_of_time(Clock::time_point t0, double limit) {
  return limit > 0.0 && seconds_since(t0) >= limit;
}

// Indices of `cand` sorted by descending score, lowest index first on ties.
void sort_by_score(std::vector<int>& cand, const Eigen::Index col, const Eigen::MatrixXd& score) {
  std::stable_sort(cand.begin(), cand.end(),
                   [&](int u, int v) { return score(u, col) > score(v, col); });
}

std::vector<int> unassigned_of(const std::vector<int>& label) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(label.size()); ++v)
    if (label[v] < 0) out.push_back(v);
  return out;
}

void check_keq(const GraphInstance& g, int k, int m) {
  if (k < 2) throw InvalidInput("rounding needs k >= 2");
  if (k * m != g.n()) throw InvalidInput("k * m must equal n");
}

void check_X(const GraphInstance& g, const Eigen::MatrixXd& X) {
  if (X.rows() != g.n() || X.cols() != g.n()) throw InvalidInput("X has wrong order");
}

// Runs `sample(rng)` up to params.samples times and keeps the lowest cut.
template <typename Sample>
HeuristicResult best_of(const GraphInstance& g, const RoundingParams& params,
                        const std::string& method, Sample sample) {
  if (params.samples < 1) throw InvalidInput("need at least one rounding sample");
  const auto t0 = Clock::now();
  HeuristicResult best;
  best.method = method;
  for (int s = 0; s < params.samples; ++s) {
    if (s > 0 && out_of_time(t0, params.time_limit)) break;
    Rng rng(Rng::derive(params.seed, static_cast<std::uint64_t>(s)));
    Partition p(sample(rng));
    const double cut = cut_value(g, p);
    if (s == 0 || cut < best.ub) {
      best.ub = cut;
      best.partition = std::move(p);
    }
    best.samples_used = s + 1;
  }
  best.elapsed = seconds_since(t0);
  return best;
}

double gain(const GraphInstance& g, const std::vector<double>& D, int s, int t) {
  return D[s] + D[t] - 2.0 * g.weight(s, t);
}

double group_weight(const std::vector<int>& P, const Eigen::VectorXd& a) {
  double w = 0.0;
  for (int v : P) w += a(v);
  return w;
}

}  // namespace

std::string to_string(HeuristicMethod m) {
  switch (m) {
    case HeuristicMethod::Hyp: return "Hyp";
    case HeuristicMethod::Vc: return "Vc";
    case HeuristicMethod::HypTwoOpt: return "Hyp+2opt";
    case HeuristicMethod::VcTwoOpt: return "Vc+2opt";
  }
  return "?";
}

HeuristicMethod heuristic_from_string(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "hyp") return HeuristicMethod::Hyp;
  if (t == "vc") return HeuristicMethod::Vc;
  if (t == "hyp+2opt") return HeuristicMethod::HypTwoOpt;
  if (t == "vc+2opt") return HeuristicMethod::VcTwoOpt;
  throw InvalidInput("unknown heuristic '" + s + "' (expected vc, hyp, vc+2opt or hyp+2opt)");
}

Eigen::MatrixXd hyperplane_transform(const Eigen::MatrixXd& X, int k) {
  if (k < 2) throw InvalidInput("hyperplane transform needs k >= 2");
  return (k * X - Eigen::MatrixXd::Ones(X.rows(), X.cols())) / (k - 1);
}

HeuristicResult hyperplane_round(const GraphInstance& g, const Eigen::MatrixXd& X, int k, int m,
                                 const RoundingParams& params) {
  check_keq(g, k, m);
  check_X(g, X);
  const int n = g.n();
  const Eigen::MatrixXd Vr = gram_factor(hyperplane_transform(X, k));
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
  V.rightCols(Vr.cols()) = Vr;

  return best_of(g, params, "Hyp", [&](Rng& rng) {
    Eigen::MatrixXd r(n, k);
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < n; ++i) r(i, t) = params.gaussian ? rng.normal() : rng.uniform01();
    const Eigen::MatrixXd score = V * r;
    std::vector<int> label(n, -1);
    for (int t = 0; t < k; ++t) {
      std::vector<int> cand = unassigned_of(label);
      sort_by_score(cand, t, score);
      for (int i = 0; i < m; ++i) label[cand[i]] = t;
    }
    return label;
  });
}

HeuristicResult vc_round_keq(const GraphInstance& g, const Eigen::MatrixXd& X, int k, int m,
                             const RoundingParams& params) {
  check_keq(g, k, m);
  check_X(g, X);
  const int n = g.n();
  const Eigen::MatrixXd sim = X * X.transpose();

  return best_of(g, params, "Vc", [&](Rng& rng) {
    std::vector<int> label(n, -1);
    for (int t = 0; t < k; ++t) {
      std::vector<int> cand = unassigned_of(label);
      const int seed = cand[rng.index(cand.size())];
      label[seed] = t;
      cand.erase(std::find(cand.begin(), cand.end(), seed));
      sort_by_score(cand, seed, sim);
      for (int i = 0; i < m - 1; ++i) label[cand[i]] = t;
    }
    return label;
  });
}

HeuristicResult vc_round_gpkc(const GraphInstance& g, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& a, double W,
                              const RoundingParams& params) {
  check_X(g, X);
  const int n = g.n();
  if (a.size() != n) throw InvalidInput("vertex weights have wrong length");
  for (int i = 0; i < n; ++i)
    if (a(i) > W) throw InfeasibleSpec("vertex weight exceeds capacity");
  const Eigen::MatrixXd sim = X * X.transpose();

  return best_of(g, params, "Vc", [&](Rng& rng) {
    std::vector<int> label(n, -1);
    int group = 0;
    std::vector<int> cand = unassigned_of(label);
    while (!cand.empty()) {
      const int seed = cand[rng.index(cand.size())];
      label[seed] = group;
      double load = a(seed);
      cand.erase(std::find(cand.begin(), cand.end(), seed));
      sort_by_score(cand, seed, sim);
      for (int j : cand) {
        if (load + a(j) <= W) {
          label[j] = group;
          load += a(j);
        }
      }
      ++group;
      cand = unassigned_of(label);
    }
    return label;
  });
}

int two_opt_pair(const GraphInstance& g, std::vector<int>& P1, std::vector<int>& P2,
                 const Eigen::VectorXd& a, double W) {
  const bool capacity = a.size() > 0;
  std::vector<double> D(g.n(), 0.0);
  auto recompute = [&](int v, const std::vector<int>& own, const std::vector<int>& other) {
    double d = 0.0;
    for (int u : other) d += g.weight(v, u);
    for (int u : own) d -= g.weight(v, u);
    D[v] = d;
  };
  for (int v : P1) recompute(v, P1, P2);
  for (int v : P2) recompute(v, P2, P1);
  double w1 = capacity ? group_weight(P1, a) : 0.0;
  double w2 = capacity ? group_weight(P2, a) : 0.0;

  int swaps = 0;
  while (true) {
    double best = kGainTol;
    int bs = -1, bt = -1;
    for (std::size_t x = 0; x < P1.size(); ++x) {
      for (std::size_t y = 0; y < P2.size(); ++y) {
        const int s = P1[x], t = P2[y];
        if (capacity && (w1 - a(s) + a(t) > W || w2 - a(t) + a(s) > W)) continue;
        const double gval = gain(g, D, s, t);
        if (gval > best) {
          best = gval;
          bs = static_cast<int>(x);
          bt = static_cast<int>(y);
        }
      }
    }
    if (bs < 0) break;
    const int s = P1[bs], t = P2[bt];
    for (int x : P1)
      if (x != s) D[x] += 2.0 * g.weight(x, s) - 2.0 * g.weight(x, t);
    for (int y : P2)
      if (y != t) D[y] += 2.0 * g.weight(y, t) - 2.0 * g.weight(y, s);
    P1[bs] = t;
    P2[bt] = s;
    recompute(t, P1, P2);
    recompute(s, P2, P1);
    if (capacity) {
      w1 += a(t) - a(s);
      w2 += a(s) - a(t);
    }
    ++swaps;
  }
  return swaps;
}

Partition two_opt_multi(const GraphInstance& g, const Partition& start,
                        const PartitionSpec& spec, double time_limit, std::uint64_t seed) {
  if (start.n() != g.n()) throw InvalidInput("partition size differs from graph order");
  std::vector<std::vector<int>> groups = start.groups();
  const int k = static_cast<int>(groups.size());
  if (k < 2) return start;
  Eigen::VectorXd a;
  double W = 0.0;
  if (const auto* gp = std::get_if<Gpkc>(&spec)) {
    a = gp->a;
    W = gp->W;
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);

  const auto t0 = Clock::now();
  Rng rng(seed);
  while (true) {
    rng.shuffle(std::span(pairs));
    int swaps = 0;
    for (const auto& [i, j] : pairs) swaps += two_opt_pair(g, groups[i], groups[j], a, W);
    if (swaps == 0 || out_of_time(t0, time_limit)) break;
  }
  return Partition::from_groups(groups, g.n());
}

HeuristicResult run_heuristic(const GraphInstance& g, const Eigen::MatrixXd& X,
                              const PartitionSpec& spec, HeuristicMethod method,
                              const RoundingParams& params) {
  const auto t0 = Clock::now();
  const bool hyp = method == HeuristicMethod::Hyp || method == HeuristicMethod::HypTwoOpt;
  HeuristicResult res;
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) {
    res = hyp ? hyperplane_round(g, X, keq->k, keq->m, params)
              : vc_round_keq(g, X, keq->k, keq->m, params);
  } else {
    if (hyp) throw InvalidInput("hyperplane rounding applies to k-equipartition only");
    const auto& gp = std::get<Gpkc>(spec);
    res = vc_round_gpkc(g, X, gp.a, gp.W, params);
  }
  if (method == HeuristicMethod::HypTwoOpt || method == HeuristicMethod::VcTwoOpt) {
    double remaining = 0.0;
    if (params.time_limit > 0.0) remaining = std::max(1e-9, params.time_limit - seconds_since(t0));
    res.partition = two_opt_multi(g, res.partition, spec, remaining,
                                  Rng::derive(params.seed, 0x2097));
    res.ub = cut_value(g, res.partition);
  }
  res.method = to_string(method);
  res.elapsed = seconds_since(t0);
  return res;
}

void write_heuristic_row(std::ostream& out, const std::string& instance,
                         const HeuristicResult& r) {
  out << instance << ',' << r.method << ',' << format_double(r.ub) << ',' << r.samples_used
      << ',' << format_double(r.elapsed) << '\n';
}

}  // namespace gpbound
