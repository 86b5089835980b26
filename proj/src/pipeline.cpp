#include "gpbound/pipeline.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "gpbound/errors.hpp"
#include "gpbound/instance_io.hpp"
#include "gpbound/models.hpp"

namespace gpbound {

namespace {

double spec_value(const PartitionSpec& spec) {
  if (const auto* keq = std::get_if<KEquipartition>(&spec)) return keq->k;
  return std::get<Gpkc>(spec).W;
}

AdmmStatus status_from_string(const std::string& s) {
  if (s == "converged") return AdmmStatus::Converged;
  if (s == "iter_limit") return AdmmStatus::IterLimit;
  throw InvalidInput("unknown solve status '" + s + "'");
}

}  // namespace

std::string to_string(AdmmStatus s) {
  return s == AdmmStatus::Converged ? "converged" : "iter_limit";
}

LoadedInstance make_loaded(GraphInstance g, PartitionSpec spec) {
  validate_spec(spec, g.n());
  return LoadedInstance{std::move(g), std::move(spec), {}};
}

LoadedInstance load_instance(const std::string& path, const RunConfig& cfg) {
  InstanceData data = read_instance_file(path);
  const bool gpkc = cfg.problem == "gpkc" || (cfg.problem == "auto" && data.gpkc.has_value());
  PartitionSpec spec;
  if (gpkc) {
    if (!data.gpkc) throw InvalidInput("'" + path + "' has no capacity block for gpkc");
    spec = *data.gpkc;
  } else {
    if (cfg.k == 0) throw InvalidInput("k-equipartition needs --k");
    spec = make_keq(data.graph.n(), cfg.k);
  }
  LoadedInstance out = make_loaded(std::move(data.graph), std::move(spec));
  out.warnings = std::move(data.warnings);
  return out;
}

SolveOutcome run_solve(const LoadedInstance& inst, const RunConfig& cfg, std::ostream* trace) {
  const double kw = spec_value(inst.spec);
  const int n = inst.graph.n();
  SolveOutcome out;
  AdmmParams params = cfg.admm_params();
  params.trace = trace;

  if (cfg.relaxation == Relaxation::DnnMet) {
    CutLoopParams cp = cfg.cut_params();
    cp.admm = params;
    const CutLoopResult loop = cutting_loop(inst.graph, inst.spec, cp);
    for (const CutRound& r : loop.rounds) {
      out.rows.push_back({n, kw, r.round == 0 ? Relaxation::Dnn : Relaxation::DnnMet, r.lb,
                          r.iterations, r.seconds, r.status});
      out.certificates.push_back(r.cert);
    }
    out.X = loop.final_solve.state.X;
    out.lb = loop.rounds.back().lb;
    return out;
  }
  const SdpProblem p = build_relaxation(inst.graph, inst.spec, cfg.relaxation);
  const AdmmResult r = solve(p, params);
  const BoundCertificate cert = certify(p, r, cfg.certify, cfg.mu);
  out.rows.push_back({n, kw, cfg.relaxation, cert.value, r.iterations, r.seconds, r.status});
  out.certificates.push_back(cert);
  out.X = r.state.X;
  out.lb = cert.value;
  return out;
}

double gap_percent(double ub, double lb) { return (ub - lb) / lb * 100.0; }

HeurOutcome run_heur_on(const LoadedInstance& inst, const Eigen::MatrixXd& X,
                        const RunConfig& cfg, std::optional<double> lb) {
  HeurOutcome out;
  out.result = run_heuristic(inst.graph, X, inst.spec, cfg.method, cfg.rounding_params());
  out.row.instance = inst.graph.name();
  out.row.method = out.result.method;
  out.row.ub = out.result.ub;
  if (lb && std::isfinite(*lb) && *lb != 0.0) out.row.gap_percent = gap_percent(out.row.ub, *lb);
  return out;
}

HeurOutcome run_heur(const LoadedInstance& inst, const RunConfig& cfg, std::optional<double> lb) {
  const SolveOutcome s = run_solve(inst, cfg);
  return run_heur_on(inst, s.X, cfg, lb);
}

CsvTable solve_table(const std::vector<SolveRow>& rows) {
  CsvTable t;
  t.header = split_csv_line(kSolveCsvHeader);
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), format_double(r.k_or_W), to_string(r.relaxation),
                      format_double(r.lb), std::to_string(r.iterations),
                      format_double(r.cpu_seconds), to_string(r.status)});
  }
  return t;
}

std::vector<SolveRow> solve_rows_from(const CsvTable& t) {
  std::vector<SolveRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    SolveRow r;
    r.n = static_cast<int>(t.number(i, "n"));
    r.k_or_W = t.number(i, "k_or_W");
    r.relaxation = relaxation_from_string(t.at(i, "relaxation"));
    r.lb = t.number(i, "lb");
    r.iterations = static_cast<int>(t.number(i, "iterations"));
    r.cpu_seconds = t.number(i, "cpu_seconds");
    r.status = status_from_string(t.at(i, "status"));
    rows.push_back(r);
  }
  return rows;
}

CsvTable heur_table(const std::vector<HeurRow>& rows) {
  CsvTable t;
  t.header = split_csv_line(kHeurCsvHeader);
  for (const auto& r : rows) {
    t.rows.push_back({r.instance, r.method, format_double(r.ub),
                      r.gap_percent ? format_double(*r.gap_percent) : std::string()});
  }
  return t;
}

std::vector<HeurRow> heur_rows_from(const CsvTable& t) {
  std::vector<HeurRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    HeurRow r;
    r.instance = t.at(i, "instance");
    r.method = t.at(i, "method");
    r.ub = t.number(i, "ub");
    if (!t.at(i, "gap_vs_lb_percent").empty()) r.gap_percent = t.number(i, "gap_vs_lb_percent");
    rows.push_back(r);
  }
  return rows;
}

CsvTable oracle_table(const std::string& instance, const OracleResult& r) {
  CsvTable t;
  t.header = split_csv_line(kOracleCsvHeader);
  t.rows.push_back({instance, format_double(r.opt), std::to_string(r.enumerated)});
  return t;
}

CsvTable report_table(const std::vector<SolveRow>& rows) {
  struct Entry {
    int n;
    double kw;
    std::optional<double> sdp, dnn, met;
  };
  std::vector<Entry> entries;
  std::map<std::pair<int, double>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.n, r.k_or_W);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, entries.size()).first;
      entries.push_back({r.n, r.k_or_W, {}, {}, {}});
    }
    Entry& e = entries[it->second];
    switch (r.relaxation) {
      case Relaxation::Sdp: e.sdp = r.lb; break;
      case Relaxation::Dnn: e.dnn = r.lb; break;
      case Relaxation::DnnMet: e.met = r.lb; break;
    }
  }
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto imp = [](const std::optional<double>& base, const std::optional<double>& v) {
    if (!base || !v || *base == 0.0 || !std::isfinite(*base) || !std::isfinite(*v)) {
      return std::string();
    }
    return format_double((*v - *base) / *base * 100.0);
  };
  CsvTable t;
  t.header = split_csv_line(kReportCsvHeader);
  for (const auto& e : entries) {
    t.rows.push_back({std::to_string(e.n), format_double(e.kw), cell(e.sdp), cell(e.dnn),
                      imp(e.sdp, e.dnn), cell(e.met), imp(e.sdp, e.met)});
  }
  return t;
}

double best_lb(const std::vector<SolveRow>& rows) {
  double lb = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) lb = std::max(lb, r.lb);
  return lb;
}

double best_ub(const std::vector<HeurRow>& rows) {
  double ub = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) ub = std::min(ub, r.ub);
  return ub;
}

}  // namespace gpbound
