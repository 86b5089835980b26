#include "gpbound/models.hpp"

#include <algorithm>
#include <set>

#include "gpbound/errors.hpp"

namespace gpbound {

namespace {

SdpProblem base_problem(const GraphInstance& g) {
  SdpProblem p;
  p.n = g.n();
  p.C = 0.5 * laplacian(g);
  for (int i = 0; i < p.n; ++i) p.eq_rows.emplace_back(std::vector<SymEntry>{{i, i, 1.0}});
  p.ineq_bounds = Bounds::free(0);
  p.box = Bounds::free(static_cast<Eigen::Index>(p.n) * p.n);
  return p;
}

SdpProblem keq_problem(const GraphInstance& g, int k, Relaxation relax) {
  const KEquipartition keq = make_keq(g.n(), k);
  SdpProblem p = base_problem(g);
  const int n = p.n;
  // (X e)_i written with the symmetrized matrix (e_i e^T + e e_i^T) / 2.
  for (int i = 0; i < n; ++i) {
    std::vector<SymEntry> row;
    row.reserve(n);
    for (int j = 0; j < n; ++j) row.push_back({i, j, i == j ? 1.0 : 0.5});
    p.eq_rows.emplace_back(std::move(row));
  }
  p.b.resize(2 * n);
  p.b.head(n).setOnes();
  p.b.tail(n).setConstant(keq.m);
  if (relax != Relaxation::Sdp) {
    p.box = Bounds::constant(static_cast<Eigen::Index>(n) * n, 0.0, std::nullopt);
  }
  p.tag = ModelTag{ProblemKind::KEquipartition, relax, keq.k, keq.m};
  return p;
}

SdpProblem gpkc_problem(const GraphInstance& g, const Gpkc& spec, Relaxation relax) {
  validate_spec(spec, g.n());
  SdpProblem p = base_problem(g);
  const int n = p.n;
  p.b = Eigen::VectorXd::Ones(n);
  const bool dnn = relax != Relaxation::Sdp;
  for (int i = 0; i < n; ++i) {
    std::vector<SymEntry> row;
    row.reserve(n);
    for (int j = 0; j < n; ++j) row.push_back({i, j, i == j ? spec.a(i) : 0.5 * spec.a(j)});
    p.ineq_rows.emplace_back(std::move(row));
    p.ineq_bounds.append(dnn ? std::optional<double>(spec.a(i)) : std::nullopt, spec.W);
  }
  if (dnn) p.box = Bounds::constant(static_cast<Eigen::Index>(n) * n, 0.0, std::nullopt);
  p.tag = ModelTag{ProblemKind::Gpkc, relax, 0, 0};
  return p;
}

}  // namespace

SdpProblem build_keq_sdp(const GraphInstance& g, int k) {
  return keq_problem(g, k, Relaxation::Sdp);
}
SdpProblem build_keq_dnn(const GraphInstance& g, int k) {
  return keq_problem(g, k, Relaxation::Dnn);
}
SdpProblem build_gpkc_sdp(const GraphInstance& g, const Gpkc& spec) {
  return gpkc_problem(g, spec, Relaxation::Sdp);
}
SdpProblem build_gpkc_dnn(const GraphInstance& g, const Gpkc& spec) {
  return gpkc_problem(g, spec, Relaxation::Dnn);
}

SdpProblem build_relaxation(const GraphInstance& g, const PartitionSpec& spec,
                            Relaxation relax) {
  // dnn+met starts from the DNN; cuts are added by the cutting loop.
  const Relaxation base = relax == Relaxation::Sdp ? Relaxation::Sdp : Relaxation::Dnn;
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) {
    return keq_problem(g, keq->k, base);
  }
  return gpkc_problem(g, std::get<Gpkc>(spec), base);
}

std::vector<TriangleCut> separate_met(const Eigen::MatrixXd& X, int max_cuts, double tol) {
  const int n = static_cast<int>(X.rows());
  std::vector<TriangleCut> violated;
  for (int j = 0; j < n; ++j) {
    for (int r = j + 1; r < n; ++r) {
      const double xjr = X(j, r);
      for (int i = 0; i < n; ++i) {
        if (i == j || i == r) continue;
        const double viol = X(i, j) + X(i, r) - xjr - 1.0;
        if (viol > tol) violated.push_back({i, j, r, viol});
      }
    }
  }
  auto more_violated = [](const TriangleCut& a, const TriangleCut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return std::tie(a.i, a.j, a.r) < std::tie(b.i, b.j, b.r);
  };
  const std::size_t keep = std::min<std::size_t>(violated.size(), std::max(max_cuts, 0));
  std::partial_sort(violated.begin(), violated.begin() + keep, violated.end(), more_violated);
  violated.resize(keep);
  return violated;
}

SymSparse triangle_row(int i, int j, int r) {
  return SymSparse({{i, j, 0.5}, {i, r, 0.5}, {j, r, -0.5}});
}

SdpProblem add_cuts(const SdpProblem& p, const std::vector<TriangleCut>& cuts) {
  SdpProblem out = p;
  std::set<std::array<int, 3>> present(p.met_cuts.begin(), p.met_cuts.end());
  for (const auto& cut : cuts) {
    const int i = cut.i;
    const int j = std::min(cut.j, cut.r);
    const int r = std::max(cut.j, cut.r);
    if (i == j || i == r || j == r || i < 0 || r >= p.n) {
      throw InvalidInput("triangle cut needs three distinct vertices in range");
    }
    if (!present.insert({i, j, r}).second) {
      throw InvalidInput("duplicate triangle cut (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + "," + std::to_string(r + 1) + ")");
    }
    out.ineq_rows.push_back(triangle_row(i, j, r));
    out.ineq_bounds.append(std::nullopt, 1.0);
    out.met_cuts.push_back({i, j, r});
  }
  if (!cuts.empty()) out.tag.relaxation = Relaxation::DnnMet;
  return out;
}

}  // namespace gpbound
