#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpbound/csv.hpp"
#include "gpbound/errors.hpp"
#include "gpbound/graph.hpp"
#include "gpbound/instance_io.hpp"
#include "gpbound/oracle.hpp"
#include "gpbound/pipeline.hpp"
#include "gpbound/run_config.hpp"

namespace fs = std::filesystem;
using namespace gpbound;

namespace {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kBadArgs = 2,
  kInfeasible = 3,
  kDiverged = 4,
  kViolation = 5,
};

// Sandwich checks allow this much relative float noise.
constexpr double kSandwichTol = 1e-9;

class CertificateViolation : public Error {
 public:
  using Error::Error;
};

// Writes to stdout when path is empty. With append, the header is skipped if
// the file already has content.
void emit(const CsvTable& table, const std::string& path, bool append) {
  if (path.empty()) {
    write_csv(std::cout, table);
    return;
  }
  const bool has_content = append && fs::exists(path) && fs::file_size(path) > 0;
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  if (has_content) {
    CsvTable body = table;
    body.header.clear();
    for (const auto& r : body.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
  } else {
    write_csv(out, table);
  }
}

void warn_all(const LoadedInstance& inst) {
  for (const auto& w : inst.warnings) std::cerr << "warning: " << w << '\n';
}

struct SolverFlags {
  std::string relaxation;
  std::string rule;
  std::string certify;
  std::string config;
};

void add_instance_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("instance", cfg.input, "Instance file")->required();
  cmd->add_option("--problem", cfg.problem, "auto, keq or gpkc")
      ->check(CLI::IsMember({"auto", "keq", "gpkc"}));
  cmd->add_option("-k,--k", cfg.k, "Number of groups (k-equipartition)");
}

void add_solver_flags(CLI::App* cmd, RunConfig& cfg, SolverFlags& f) {
  cmd->add_option("--relaxation", f.relaxation, "sdp, dnn or dnn+met")
      ->check(CLI::IsMember({"sdp", "dnn", "dnn+met"}));
  cmd->add_option("--eps-tol", cfg.eps_tol, "ADMM stopping tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "ADMM iteration cap");
  cmd->add_option("--sigma0", cfg.sigma0, "Initial stepsize");
  cmd->add_option("--rule", f.rule, "Stepsize rule")
      ->check(CLI::IsMember({"auto", "adaptive", "classic", "fixed"}));
  cmd->add_option("--certify", f.certify, "Bound method")
      ->check(CLI::IsMember({"auto", "eig", "lp"}));
  cmd->add_option("--mu", cfg.mu, "Scaling of lambda_max(X) for xbar (GPKC)");
  cmd->add_option("--m-met", cfg.m_met, "Triangle cuts per round (0: 2n)");
  cmd->add_option("--max-rounds", cfg.max_rounds, "Cutting rounds including the first solve");
  cmd->add_option("--config", f.config, "JSON config; its keys override flags");
}

void finish_config(RunConfig& cfg, const SolverFlags& f) {
  if (!f.relaxation.empty()) cfg.relaxation = relaxation_from_string(f.relaxation);
  if (!f.rule.empty()) cfg.rule = step_rule_from_string(f.rule);
  if (!f.certify.empty()) cfg.certify = certify_route_from_string(f.certify);
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  cfg.validate();
}

int cmd_gen(int n, const std::vector<double>& densities, std::uint64_t seed, int gpkc_k,
            std::string out_dir) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  if (out_dir.empty()) out_dir = default_output_dir();
  fs::create_directories(out_dir);
  for (double d : densities) {
    if (!(d >= 0.0 && d <= 1.0)) throw InvalidInput("density must lie in [0, 1]");
    std::string path;
    if (gpkc_k > 0) {
      const GpkcInstance inst = gen_gpkc_instance(n, d, gpkc_k, seed);
      path = (fs::path(out_dir) / (inst.graph.name() + ".gp")).string();
      write_instance_file(path, inst.graph, inst.spec);
    } else {
      const GraphInstance g = gen_rand_graph(n, d, seed);
      path = (fs::path(out_dir) / (g.name() + ".gp")).string();
      write_instance_file(path, g);
    }
    std::cout << path << '\n';
  }
  return kOk;
}

int cmd_solve(const RunConfig& cfg, const std::string& cert_out, bool append) {
  const LoadedInstance inst = load_instance(cfg.input, cfg);
  warn_all(inst);
  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  RunConfig run = cfg;
  if (!cfg.trace.empty()) {
    trace_file.open(cfg.trace);
    if (!trace_file) throw InvalidInput("cannot write trace '" + cfg.trace + "'");
    trace = &trace_file;
    if (run.trace_every == 0) run.trace_every = 100;
  }
  const SolveOutcome s = run_solve(inst, run, trace);
  emit(solve_table(s.rows), cfg.output, append);
  if (!cert_out.empty()) {
    const bool has_content = append && fs::exists(cert_out) && fs::file_size(cert_out) > 0;
    std::ofstream out(cert_out, append ? std::ios::app : std::ios::trunc);
    if (!has_content) out << kCertificateCsvHeader << '\n';
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      write_certificate_row(out, inst.graph.name(), s.rows[i].relaxation, s.certificates[i],
                            s.rows[i].status == AdmmStatus::Converged);
    }
  }
  return kOk;
}

int cmd_heur(const RunConfig& cfg, std::optional<double> lb, const std::string& lb_file,
             const std::string& detail_out, bool append) {
  const LoadedInstance inst = load_instance(cfg.input, cfg);
  warn_all(inst);
  if (!lb && !lb_file.empty()) lb = best_lb(solve_rows_from(read_csv_file(lb_file)));
  const HeurOutcome h = run_heur(inst, cfg, lb);
  if (!is_feasible(h.result.partition, inst.spec)) {
    throw Error("heuristic returned an infeasible partition");
  }
  emit(heur_table({h.row}), cfg.output, append);
  if (!detail_out.empty()) {
    const bool has_content = append && fs::exists(detail_out) && fs::file_size(detail_out) > 0;
    std::ofstream out(detail_out, append ? std::ios::app : std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + detail_out + "'");
    if (!has_content) out << kHeuristicCsvHeader << '\n';
    write_heuristic_row(out, inst.graph.name(), h.result);
  }
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, const std::string& lb_file, const std::string& ub_file,
               bool append) {
  const LoadedInstance inst = load_instance(cfg.input, cfg);
  warn_all(inst);
  const OracleResult r = brute_force(inst.graph, inst.spec);
  emit(oracle_table(inst.graph.name(), r), cfg.output, append);
  const double slack = kSandwichTol * (1.0 + std::abs(r.opt));
  if (!lb_file.empty()) {
    const double lb = best_lb(solve_rows_from(read_csv_file(lb_file)));
    if (lb > r.opt + slack) {
      throw CertificateViolation("lower bound " + format_double(lb) + " exceeds optimum " +
                                 format_double(r.opt));
    }
  }
  if (!ub_file.empty()) {
    const double ub = best_ub(heur_rows_from(read_csv_file(ub_file)));
    if (ub < r.opt - slack) {
      throw CertificateViolation("upper bound " + format_double(ub) + " is below optimum " +
                                 format_double(r.opt));
    }
  }
  return kOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<SolveRow> rows;
  for (const auto& path : inputs) {
    const auto part = solve_rows_from(read_csv_file(path));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  emit(report_table(rows), out, false);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower and upper bounds for graph partition problems"};
  app.require_subcommand(1);

  // gen
  int gen_n = 0;
  std::vector<double> gen_dens{0.2, 0.5, 0.8};
  std::uint64_t gen_seed = 1;
  int gen_k = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate random instances");
  gen->add_option("-n,--n", gen_n, "Number of vertices")->required();
  gen->add_option("--density", gen_dens, "Edge densities, one file each")->delimiter(',');
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--gpkc", gen_k, "Write GPKC instances with capacity from a k-equipartition");
  gen->add_option("--out-dir", gen_out, "Output directory (default: $GPBOUND_OUT_DIR or .)");

  // solve
  RunConfig solve_cfg;
  SolverFlags solve_flags;
  std::string cert_out;
  bool solve_append = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a relaxation and certify a lower bound");
  add_instance_flags(solve_cmd, solve_cfg);
  add_solver_flags(solve_cmd, solve_cfg, solve_flags);
  solve_cmd->add_option("--trace", solve_cfg.trace, "Write the ADMM iteration CSV here");
  solve_cmd->add_option("--trace-every", solve_cfg.trace_every, "Trace period (default 100)");
  solve_cmd->add_option("-o,--out", solve_cfg.output, "Result CSV (default: stdout)");
  solve_cmd->add_option("--cert-out", cert_out, "Certificate CSV");
  solve_cmd->add_flag("--append", solve_append, "Append to existing CSV files");

  // heur
  RunConfig heur_cfg;
  SolverFlags heur_flags;
  std::string method = "vc+2opt";
  std::optional<double> heur_lb;
  std::string heur_lb_file;
  std::string heur_detail;
  bool heur_append = false;
  CLI::App* heur = app.add_subcommand("heur", "Round a relaxation solution to a feasible partition");
  add_instance_flags(heur, heur_cfg);
  add_solver_flags(heur, heur_cfg, heur_flags);
  heur->add_option("--method", method, "vc, hyp, vc+2opt or hyp+2opt");
  heur->add_option("--samples", heur_cfg.samples, "Rounding samples M");
  heur->add_option("--time-limit", heur_cfg.time_limit, "Seconds for the heuristic (0: none)");
  heur->add_option("--seed", heur_cfg.seed, "Random seed");
  heur->add_option("--lb", heur_lb, "Lower bound for the gap column");
  heur->add_option("--lb-file", heur_lb_file, "Solve CSV supplying the lower bound");
  heur->add_option("-o,--out", heur_cfg.output, "Result CSV (default: stdout)");
  heur->add_option("--detail-out", heur_detail, "CSV with sample count and elapsed time");
  heur->add_flag("--append", heur_append, "Append to an existing CSV");

  // oracle
  RunConfig oracle_cfg;
  std::string lb_file, ub_file;
  bool oracle_append = false;
  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force optimum of a small instance");
  add_instance_flags(oracle, oracle_cfg);
  oracle->add_option("--lb-file", lb_file, "Solve CSV; fail if its bound exceeds the optimum");
  oracle->add_option("--ub-file", ub_file, "Heuristic CSV; fail if its cut is below the optimum");
  oracle->add_option("-o,--out", oracle_cfg.output, "Result CSV (default: stdout)");
  oracle->add_flag("--append", oracle_append, "Append to an existing CSV");

  // report
  std::vector<std::string> report_in;
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "Tabulate improvements of DNN bounds over SDP");
  report->add_option("inputs", report_in, "Solve CSV files")->required();
  report->add_option("-o,--out", report_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArgs;
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_dens, gen_seed, gen_k, gen_out);
    if (*solve_cmd) {
      finish_config(solve_cfg, solve_flags);
      return cmd_solve(solve_cfg, cert_out, solve_append);
    }
    if (*heur) {
      heur_cfg.method = heuristic_from_string(method);
      finish_config(heur_cfg, heur_flags);
      return cmd_heur(heur_cfg, heur_lb, heur_lb_file, heur_detail, heur_append);
    }
    if (*oracle) {
      oracle_cfg.validate();
      return cmd_oracle(oracle_cfg, lb_file, ub_file, oracle_append);
    }
    if (*report) return cmd_report(report_in, report_out);
  } catch (const CertificateViolation& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  } catch (const InfeasibleSpec& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const SolverDiverged& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
