#pragma once

#include <cstdint>
#include <string>

#include "gpbound/admm.hpp"
#include "gpbound/certify.hpp"
#include "gpbound/cutting_loop.hpp"
#include "gpbound/rounding.hpp"
#include "gpbound/sdp_problem.hpp"

namespace gpbound {

struct RunConfig {
  std::string problem = "auto";  // auto | keq | gpkc
  int k = 0;                    // groups, k-equipartition only
  Relaxation relaxation = Relaxation::Dnn;

  double eps_tol = 1e-5;
  int max_iter = 20000;
  double sigma0 = 1.0;
  StepRule rule = StepRule::Auto;

  CertifyRoute certify = CertifyRoute::Auto;
  double mu = kDefaultMu;

  HeuristicMethod method = HeuristicMethod::VcTwoOpt;
  int samples = 100;
  double time_limit = 5.0;
  std::uint64_t seed = 1;

  int m_met = 0;  // 0 means 2n
  int max_rounds = 10;

  std::string input;
  std::string output;
  std::string trace;
  int trace_every = 0;

  AdmmParams admm_params() const;
  RoundingParams rounding_params() const;
  CutLoopParams cut_params() const;

  // Throws InvalidInput for values outside their documented ranges.
  void validate() const;
};

std::string to_string(StepRule r);
StepRule step_rule_from_string(const std::string& s);
std::string to_string(CertifyRoute r);

// The keys present in a JSON object replace the corresponding fields.
// Unknown keys are rejected.
void apply_config_json(RunConfig& cfg, const std::string& json_text);
void apply_config_file(RunConfig& cfg, const std::string& path);
std::string config_to_json(const RunConfig& cfg);

// Value of GPBOUND_OUT_DIR, or "." when unset.
std::string default_output_dir();

}  // namespace gpbound
