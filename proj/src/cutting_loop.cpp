#include "gpbound/cutting_loop.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "gpbound/errors.hpp"

namespace gpbound {

namespace {

CutRound record(int round, int added, const SdpProblem& p, const AdmmResult& r,
                const BoundCertificate& cert, double best) {
  CutRound out;
  out.round = round;
  out.cuts_added = added;
  out.cuts_total = static_cast<int>(p.met_cuts.size());
  out.cert = cert;
  out.certified = cert.value;
  out.lb = std::max(best, cert.value);
  out.status = r.status;
  out.iterations = r.iterations;
  out.seconds = r.seconds;
  out.max_residual = r.residuals.max();
  return out;
}

}  // namespace

CutLoopResult cutting_loop(const GraphInstance& g, const PartitionSpec& spec,
                           const CutLoopParams& params) {
  if (params.max_rounds < 1) throw InvalidInput("max_rounds must be at least 1");
  const int m_met = params.m_met > 0 ? params.m_met : 2 * g.n();

  CutLoopResult out;
  SdpProblem p = build_relaxation(g, spec, Relaxation::Dnn);
  AdmmResult r = solve(p, params.admm);
  BoundCertificate cert = certify(p, r, params.route, params.mu);
  out.rounds.push_back(record(0, 0, p, r, cert, cert.value));

  for (int round = 1; round < params.max_rounds; ++round) {
    const std::set<std::array<int, 3>> present(p.met_cuts.begin(), p.met_cuts.end());
    std::vector<TriangleCut> found = separate_met(
        r.state.X, m_met + static_cast<int>(present.size()), params.violation_tol);
    std::vector<TriangleCut> fresh;
    for (const auto& c : found) {
      const std::array<int, 3> key{c.i, std::min(c.j, c.r), std::max(c.j, c.r)};
      if (!present.count(key)) fresh.push_back(c);
      if (static_cast<int>(fresh.size()) == m_met) break;
    }
    if (fresh.empty()) break;
    p = add_cuts(p, fresh);
    r = solve(p, params.admm, r.state);
    cert = certify(p, r, params.route, params.mu);
    out.rounds.push_back(record(round, static_cast<int>(fresh.size()), p, r, cert,
                                out.rounds.back().lb));
  }
  out.final_problem = std::move(p);
  out.final_solve = std::move(r);
  return out;
}

}  // namespace gpbound
