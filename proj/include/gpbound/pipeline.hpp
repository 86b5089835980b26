#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpbound/csv.hpp"
#include "gpbound/graph.hpp"
#include "gpbound/oracle.hpp"
#include "gpbound/rounding.hpp"
#include "gpbound/run_config.hpp"

namespace gpbound {

struct LoadedInstance {
  GraphInstance graph;
  PartitionSpec spec;
  std::vector<std::string> warnings;
};

// problem "auto" picks GPKC when the file has a capacity block; k-equipartition
// needs cfg.k.
LoadedInstance load_instance(const std::string& path, const RunConfig& cfg);
LoadedInstance make_loaded(GraphInstance g, PartitionSpec spec);

inline constexpr const char* kSolveCsvHeader =
    "n,k_or_W,relaxation,lb,iterations,cpu_seconds,status";
inline constexpr const char* kHeurCsvHeader = "instance,method,ub,gap_vs_lb_percent";
inline constexpr const char* kOracleCsvHeader = "instance,opt,enumerated";
inline constexpr const char* kReportCsvHeader =
    "n,k_or_W,lb_sdp,lb_dnn,imp_dnn_percent,lb_dnn_met,imp_dnn_met_percent";

struct SolveRow {
  int n = 0;
  double k_or_W = 0.0;
  Relaxation relaxation = Relaxation::Dnn;
  double lb = 0.0;
  int iterations = 0;
  double cpu_seconds = 0.0;
  AdmmStatus status = AdmmStatus::IterLimit;
};

std::string to_string(AdmmStatus s);

struct SolveOutcome {
  std::vector<SolveRow> rows;  // one row, or one per round for dnn+met
  std::vector<BoundCertificate> certificates;
  Eigen::MatrixXd X;  // last iterate, for rounding
  double lb = 0.0;    // best certified bound
};

// Solves cfg.relaxation and certifies it. The trace stream, when given,
// receives the ADMM iteration CSV.
SolveOutcome run_solve(const LoadedInstance& inst, const RunConfig& cfg,
                       std::ostream* trace = nullptr);

struct HeurRow {
  std::string instance;
  std::string method;
  double ub = 0.0;
  std::optional<double> gap_percent;
};

struct HeurOutcome {
  HeurRow row;
  HeuristicResult result;
};

// (ub - lb) / lb * 100.
double gap_percent(double ub, double lb);

// Rounds the X of cfg.relaxation; the heuristic time limit does not include
// the solve.
HeurOutcome run_heur(const LoadedInstance& inst, const RunConfig& cfg,
                     std::optional<double> lb = std::nullopt);
HeurOutcome run_heur_on(const LoadedInstance& inst, const Eigen::MatrixXd& X,
                        const RunConfig& cfg, std::optional<double> lb = std::nullopt);

CsvTable solve_table(const std::vector<SolveRow>& rows);
std::vector<SolveRow> solve_rows_from(const CsvTable& t);
CsvTable heur_table(const std::vector<HeurRow>& rows);
std::vector<HeurRow> heur_rows_from(const CsvTable& t);
CsvTable oracle_table(const std::string& instance, const OracleResult& r);

// Groups solve rows by (n, k_or_W) in input order; the dnn+met entry is the
// last row of that relaxation.
CsvTable report_table(const std::vector<SolveRow>& rows);

// Largest lb among solve rows and smallest ub among heuristic rows.
double best_lb(const std::vector<SolveRow>& rows);
double best_ub(const std::vector<HeurRow>& rows);

}  // namespace gpbound
