#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gpbound/csv.hpp"
#include "gpbound/errors.hpp"
#include "gpbound/instance_io.hpp"
#include "gpbound/pipeline.hpp"
#include "gpbound/run_config.hpp"

namespace fs = std::filesystem;
using namespace gpbound;

namespace {

class Workdir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("gpbound_" + std::string(info->test_suite_name()) + "_" + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with stdout and stderr captured in files; returns the exit code.
  int cli(const std::string& args, std::string* out = nullptr) const {
    const std::string cmd = std::string("\"") + GPBOUND_CLI + "\" " + args + " >\"" +
                            path("stdout.txt") + "\" 2>\"" + path("stderr.txt") + "\"";
    const int status = std::system(cmd.c_str());
    if (out) *out = slurp(path("stdout.txt"));
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

RunConfig fast_config() {
  RunConfig cfg;
  cfg.time_limit = 0.0;
  cfg.samples = 20;
  return cfg;
}

}  // namespace

TEST(Csv, RoundTrip) {
  CsvTable t;
  t.header = {"a", "b", "c"};
  t.rows = {{"1", "", "x"}, {"inf", "-inf", "2.5"}};
  std::ostringstream out;
  write_csv(out, t);
  std::istringstream in(out.str());
  const CsvTable back = read_csv(in);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.number(1, "a"), std::numeric_limits<double>::infinity());
  EXPECT_EQ(back.number(1, "b"), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(back.column("d"), InvalidInput);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -123456.789, 16.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(16.0), "16");
}

TEST(Csv, SolveAndHeuristicRowsRoundTrip) {
  std::vector<SolveRow> rows{{8, 2, Relaxation::Sdp, 15.5, 120, 0.25, AdmmStatus::Converged},
                             {8, 2, Relaxation::DnnMet, 16.0, 3, 0.5, AdmmStatus::IterLimit}};
  std::ostringstream out;
  write_csv(out, solve_table(rows));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kSolveCsvHeader);
  std::istringstream in(out.str());
  const auto back = solve_rows_from(read_csv(in));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].relaxation, Relaxation::DnnMet);
  EXPECT_EQ(back[1].status, AdmmStatus::IterLimit);
  EXPECT_EQ(back[0].lb, 15.5);
  EXPECT_EQ(best_lb(back), 16.0);

  std::vector<HeurRow> h{{"g", "Vc+2opt", 20, 25.0}, {"g", "Hyp", 18, std::nullopt}};
  std::ostringstream hout;
  write_csv(hout, heur_table(h));
  std::istringstream hin(hout.str());
  const auto hb = heur_rows_from(read_csv(hin));
  ASSERT_EQ(hb.size(), 2u);
  EXPECT_EQ(hb[0].gap_percent, 25.0);
  EXPECT_FALSE(hb[1].gap_percent.has_value());
  EXPECT_EQ(best_ub(hb), 18.0);
}

TEST(Report, ImprovementOverSdp) {
  std::vector<SolveRow> rows{{10, 2, Relaxation::Sdp, 100, 1, 0, AdmmStatus::Converged},
                             {10, 2, Relaxation::Dnn, 110, 1, 0, AdmmStatus::Converged},
                             {10, 2, Relaxation::DnnMet, 112, 1, 0, AdmmStatus::Converged},
                             {10, 2, Relaxation::DnnMet, 120, 1, 0, AdmmStatus::Converged},
                             {12, 3, Relaxation::Dnn, 50, 1, 0, AdmmStatus::Converged}};
  const CsvTable t = report_table(rows);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(t.number(0, "imp_dnn_percent"), 10.0);
  EXPECT_DOUBLE_EQ(t.number(0, "lb_dnn_met"), 120.0);
  EXPECT_DOUBLE_EQ(t.number(0, "imp_dnn_met_percent"), 20.0);
  EXPECT_EQ(t.at(1, "lb_sdp"), "");
  EXPECT_EQ(t.at(1, "imp_dnn_percent"), "");
  EXPECT_DOUBLE_EQ(gap_percent(110, 100), 10.0);
}

TEST(Config, JsonOverridesAndRejectsUnknownKeys) {
  RunConfig cfg;
  apply_config_json(cfg, R"({"eps_tol": 1e-3, "relaxation": "dnn+met", "method": "hyp+2opt",
                             "max_rounds": 4, "seed": 7})");
  EXPECT_EQ(cfg.eps_tol, 1e-3);
  EXPECT_EQ(cfg.relaxation, Relaxation::DnnMet);
  EXPECT_EQ(cfg.method, HeuristicMethod::HypTwoOpt);
  EXPECT_EQ(cfg.cut_params().max_rounds, 4);
  EXPECT_EQ(cfg.rounding_params().seed, 7u);
  EXPECT_EQ(cfg.admm_params().eps_tol, 1e-3);

  RunConfig copy;
  apply_config_json(copy, config_to_json(cfg));
  EXPECT_EQ(config_to_json(copy), config_to_json(cfg));

  EXPECT_THROW(apply_config_json(cfg, R"({"tolerance": 1})"), InvalidInput);
  EXPECT_THROW(apply_config_json(cfg, R"({"eps_tol": "small"})"), InvalidInput);
  EXPECT_THROW(apply_config_json(cfg, R"({"eps_tol": -1})"), InvalidInput);
  EXPECT_THROW(apply_config_json(cfg, "{oops"), ParseError);
}

TEST(Pipeline, CompleteGraphSolveAndHeuristic) {
  RunConfig cfg = fast_config();
  cfg.k = 2;
  const LoadedInstance inst = make_loaded(complete_graph(8), make_keq(8, 2));
  const SolveOutcome s = run_solve(inst, cfg);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_NEAR(s.lb, 16.0, 1e-2);
  EXPECT_EQ(s.rows[0].k_or_W, 2.0);
  const HeurOutcome h = run_heur_on(inst, s.X, cfg, s.lb);
  EXPECT_EQ(h.row.ub, 16.0);
  ASSERT_TRUE(h.row.gap_percent.has_value());
  EXPECT_NEAR(*h.row.gap_percent, 0.0, 1e-1);
  const HeurOutcome none = run_heur_on(inst, s.X, cfg);
  EXPECT_FALSE(none.row.gap_percent.has_value());
}

TEST(Pipeline, NestingAndCutRounds) {
  const GraphInstance g = gen_rand_graph(12, 0.5, 5);
  RunConfig cfg = fast_config();
  const LoadedInstance inst = make_loaded(g, make_keq(12, 3));
  cfg.relaxation = Relaxation::Sdp;
  const double sdp = run_solve(inst, cfg).lb;
  cfg.relaxation = Relaxation::Dnn;
  const double dnn = run_solve(inst, cfg).lb;
  EXPECT_LE(sdp, dnn + 1e-6 * (1 + std::abs(dnn)));
  cfg.relaxation = Relaxation::DnnMet;
  cfg.max_rounds = 3;
  const SolveOutcome met = run_solve(inst, cfg);
  EXPECT_LE(met.rows.size(), 3u);
  EXPECT_EQ(met.rows.front().relaxation, Relaxation::Dnn);
  for (std::size_t i = 1; i < met.rows.size(); ++i) {
    EXPECT_GE(met.rows[i].lb, met.rows[i - 1].lb);
  }
}

TEST(Pipeline, HeuristicReproducible) {
  const GpkcInstance gi = gen_gpkc_instance(10, 0.5, 2, 3);
  const LoadedInstance inst = make_loaded(gi.graph, gi.spec);
  const RunConfig cfg = fast_config();
  const HeurOutcome a = run_heur(inst, cfg), b = run_heur(inst, cfg);
  EXPECT_EQ(a.result.partition, b.result.partition);
  EXPECT_TRUE(is_feasible(a.result.partition, gi.spec));
}

TEST_F(Workdir, GenWritesOneFilePerDensity) {
  std::string out;
  ASSERT_EQ(cli("gen -n 10 --seed 3 --out-dir \"" + path("g") + "\"", &out), 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(path("g"))) {
    ++files;
    EXPECT_EQ(e.path().extension(), ".gp");
  }
  EXPECT_EQ(files, 3);

  std::string again;
  ASSERT_EQ(cli("gen -n 10 --seed 3 --out-dir \"" + path("h") + "\"", &again), 0);
  for (const auto& e : fs::directory_iterator(path("g"))) {
    EXPECT_EQ(slurp(e.path().string()), slurp(path("h") + "/" + e.path().filename().string()));
  }

  ASSERT_EQ(cli("gen -n 8 --density 0.5 --gpkc 2 --out-dir \"" + path("k") + "\""), 0);
  const auto it = fs::directory_iterator(path("k"));
  const std::string text = slurp(it->path().string());
  EXPECT_NE(text.find("\nk "), std::string::npos);
}

TEST_F(Workdir, SolveHeurOracleSandwich) {
  write_instance_file(path("k8.gp"), complete_graph(8));
  const std::string inst = "\"" + path("k8.gp") + "\"";
  ASSERT_EQ(cli("solve " + inst + " -k 2 --relaxation dnn -o \"" + path("lb.csv") +
                "\" --cert-out \"" + path("cert.csv") + "\" --trace \"" + path("trace.csv") + "\""),
            0);
  const auto rows = solve_rows_from(read_csv_file(path("lb.csv")));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].lb, 16.0, 1e-2);
  EXPECT_EQ(read_csv_file(path("cert.csv")).header.size(), 7u);
  EXPECT_EQ(slurp(path("trace.csv")).rfind(kTraceHeader, 0), 0u);

  ASSERT_EQ(cli("heur " + inst + " -k 2 --time-limit 0 --lb-file \"" + path("lb.csv") +
                "\" -o \"" + path("ub.csv") + "\" --detail-out \"" + path("detail.csv") + "\""),
            0);
  const CsvTable detail = read_csv_file(path("detail.csv"));
  EXPECT_EQ(detail.header, split_csv_line(kHeuristicCsvHeader));
  EXPECT_EQ(detail.number(0, "samples"), 100.0);
  const auto heur = heur_rows_from(read_csv_file(path("ub.csv")));
  ASSERT_EQ(heur.size(), 1u);
  EXPECT_EQ(heur[0].ub, 16.0);
  EXPECT_EQ(heur[0].method, "Vc+2opt");

  std::string out;
  ASSERT_EQ(cli("oracle " + inst + " -k 2 --lb-file \"" + path("lb.csv") + "\" --ub-file \"" +
                path("ub.csv") + "\"", &out),
            0);
  std::istringstream oin(out);
  const CsvTable ot = read_csv(oin);
  EXPECT_EQ(ot.number(0, "opt"), 16.0);
  EXPECT_EQ(ot.number(0, "enumerated"), 35.0);

  // A lower bound above the optimum is a certificate violation.
  std::vector<SolveRow> fake = rows;
  fake[0].lb = 17.0;
  std::ofstream(path("bad.csv")) << [&] {
    std::ostringstream s;
    write_csv(s, solve_table(fake));
    return s.str();
  }();
  EXPECT_EQ(cli("oracle " + inst + " -k 2 --lb-file \"" + path("bad.csv") + "\""), 5);

  ASSERT_EQ(cli("solve " + inst + " -k 2 --relaxation sdp -o \"" + path("lb.csv") + "\" --append"), 0);
  ASSERT_EQ(cli("report \"" + path("lb.csv") + "\"", &out), 0);
  std::istringstream rin(out);
  const CsvTable rt = read_csv(rin);
  ASSERT_EQ(rt.rows.size(), 1u);
  EXPECT_NE(rt.at(0, "imp_dnn_percent"), "");
}

TEST_F(Workdir, ExitCodes) {
  write_instance_file(path("g20.gp"), gen_rand_graph(20, 0.5, 1));
  const GpkcInstance big = gen_gpkc_instance(20, 0.5, 2, 1);
  write_instance_file(path("p20.gp"), big.graph, big.spec);
  EXPECT_EQ(cli("oracle \"" + path("g20.gp") + "\" -k 4"), 2);
  EXPECT_EQ(cli("oracle \"" + path("p20.gp") + "\""), 2);
  EXPECT_EQ(cli("solve \"" + path("g20.gp") + "\" -k 3"), 2);
  EXPECT_EQ(cli("solve \"" + path("g20.gp") + "\" --relaxation nope -k 2"), 2);
  EXPECT_EQ(cli("solve \"" + path("missing.gp") + "\" -k 2"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);

  std::ofstream(path("inf.gp")) << [&] {
    std::ostringstream s;
    write_instance(s, gen_rand_graph(6, 0.5, 1), Gpkc{Eigen::VectorXd::Constant(6, 1.0), 4.0});
    std::string t = s.str();
    // Raise one vertex weight above the capacity.
    const auto pos = t.find("v 1 1");
    t.replace(pos, 5, "v 1 9");
    return t;
  }();
  EXPECT_EQ(cli("solve \"" + path("inf.gp") + "\""), 3);
}
