#include "gpbound/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gpbound/errors.hpp"

namespace gpbound {

using nlohmann::json;

std::string to_string(StepRule r) {
  switch (r) {
    case StepRule::Auto: return "auto";
    case StepRule::Adaptive: return "adaptive";
    case StepRule::Classic: return "classic";
    case StepRule::Fixed: return "fixed";
  }
  return "?";
}

StepRule step_rule_from_string(const std::string& s) {
  if (s == "auto") return StepRule::Auto;
  if (s == "adaptive") return StepRule::Adaptive;
  if (s == "classic") return StepRule::Classic;
  if (s == "fixed") return StepRule::Fixed;
  throw InvalidInput("unknown stepsize rule '" + s + "' (expected auto, adaptive, classic or fixed)");
}

std::string to_string(CertifyRoute r) {
  switch (r) {
    case CertifyRoute::Auto: return "auto";
    case CertifyRoute::Eig: return "eig";
    case CertifyRoute::Lp: return "lp";
  }
  return "?";
}

AdmmParams RunConfig::admm_params() const {
  AdmmParams p;
  p.eps_tol = eps_tol;
  p.max_iter = max_iter;
  p.sigma0 = sigma0;
  p.rule = rule;
  p.trace_every = trace_every;
  return p;
}

RoundingParams RunConfig::rounding_params() const {
  RoundingParams p;
  p.samples = samples;
  p.time_limit = time_limit;
  p.seed = seed;
  return p;
}

CutLoopParams RunConfig::cut_params() const {
  CutLoopParams p;
  p.max_rounds = max_rounds;
  p.m_met = m_met;
  p.admm = admm_params();
  p.route = certify;
  p.mu = mu;
  return p;
}

void RunConfig::validate() const {
  if (problem != "auto" && problem != "keq" && problem != "gpkc") {
    throw InvalidInput("problem must be auto, keq or gpkc, got '" + problem + "'");
  }
  if (k != 0 && k < 2) throw InvalidInput("k must be at least 2");
  if (!(eps_tol > 0.0 && eps_tol < 1.0)) throw InvalidInput("eps_tol must lie in (0, 1)");
  if (max_iter < 1) throw InvalidInput("max_iter must be positive");
  if (!(sigma0 > 0.0)) throw InvalidInput("sigma0 must be positive");
  if (!(mu > 1.0)) throw InvalidInput("mu must exceed 1");
  if (samples < 1) throw InvalidInput("samples must be positive");
  if (time_limit < 0.0) throw InvalidInput("time_limit must be nonnegative");
  if (m_met < 0) throw InvalidInput("m_met must be nonnegative");
  if (max_rounds < 1) throw InvalidInput("max_rounds must be positive");
  if (trace_every < 0) throw InvalidInput("trace_every must be nonnegative");
}

void apply_config_json(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "problem") cfg.problem = val.get<std::string>();
      else if (key == "k") cfg.k = val.get<int>();
      else if (key == "relaxation") cfg.relaxation = relaxation_from_string(val.get<std::string>());
      else if (key == "eps_tol") cfg.eps_tol = val.get<double>();
      else if (key == "max_iter") cfg.max_iter = val.get<int>();
      else if (key == "sigma0") cfg.sigma0 = val.get<double>();
      else if (key == "rule") cfg.rule = step_rule_from_string(val.get<std::string>());
      else if (key == "certify") cfg.certify = certify_route_from_string(val.get<std::string>());
      else if (key == "mu") cfg.mu = val.get<double>();
      else if (key == "method") cfg.method = heuristic_from_string(val.get<std::string>());
      else if (key == "samples") cfg.samples = val.get<int>();
      else if (key == "time_limit") cfg.time_limit = val.get<double>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "m_met") cfg.m_met = val.get<int>();
      else if (key == "max_rounds") cfg.max_rounds = val.get<int>();
      else if (key == "input") cfg.input = val.get<std::string>();
      else if (key == "output") cfg.output = val.get<std::string>();
      else if (key == "trace") cfg.trace = val.get<std::string>();
      else if (key == "trace_every") cfg.trace_every = val.get<int>();
      else throw InvalidInput("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config value has wrong type: ") + e.what());
  }
  cfg.validate();
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_json(cfg, ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j = {
      {"problem", cfg.problem},
      {"k", cfg.k},
      {"relaxation", to_string(cfg.relaxation)},
      {"eps_tol", cfg.eps_tol},
      {"max_iter", cfg.max_iter},
      {"sigma0", cfg.sigma0},
      {"rule", to_string(cfg.rule)},
      {"certify", to_string(cfg.certify)},
      {"mu", cfg.mu},
      {"method", to_string(cfg.method)},
      {"samples", cfg.samples},
      {"time_limit", cfg.time_limit},
      {"seed", cfg.seed},
      {"m_met", cfg.m_met},
      {"max_rounds", cfg.max_rounds},
      {"input", cfg.input},
      {"output", cfg.output},
      {"trace", cfg.trace},
      {"trace_every", cfg.trace_every},
  };
  return j.dump(2);
}

std::string default_output_dir() {
  const char* dir = std::getenv("GPBOUND_OUT_DIR");
  return dir && *dir ? dir : ".";
}

}  // namespace gpbound
