#include "gpbound/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gpbound/errors.hpp"

namespace gpbound {

namespace {

constexpr std::string_view kNamePrefix = "# name: ";

std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double parse_number(const std::string& tok, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
  return value;
}

int parse_index(const std::string& tok, int n, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
  if (value < 1 || value > n) {
    throw ParseError("vertex index " + tok + " out of range 1.." + std::to_string(n), line);
  }
  return value - 1;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

InstanceData read_instance(std::istream& in, std::string name) {
  int n = -1;
  int declared_edges = 0;
  Eigen::MatrixXd w;
  std::map<std::pair<int, int>, int> seen;  // edge -> line of last definition
  std::optional<double> capacity;
  Eigen::VectorXd a;
  std::vector<bool> has_weight;
  std::vector<std::string> warnings;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.starts_with(kNamePrefix) && name.empty()) {
      name = raw.substr(kNamePrefix.size());
      continue;
    }
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto tok = tokens(raw);
    if (tok.empty()) continue;

    const std::string& kind = tok[0];
    if (kind == "gp") {
      if (n >= 0) throw ParseError("duplicate header", lineno);
      if (tok.size() != 3) throw ParseError("header must be 'gp <n> <num_edges>'", lineno);
      n = static_cast<int>(parse_number(tok[1], lineno));
      declared_edges = static_cast<int>(parse_number(tok[2], lineno));
      if (n < 2) throw ParseError("n must be at least 2", lineno);
      w = Eigen::MatrixXd::Zero(n, n);
      continue;
    }
    if (n < 0) throw ParseError("missing 'gp' header before data", lineno);

    if (kind == "e") {
      if (tok.size() != 4) throw ParseError("edge line must be 'e <i> <j> <w>'", lineno);
      int i = parse_index(tok[1], n, lineno);
      int j = parse_index(tok[2], n, lineno);
      const double weight = parse_number(tok[3], lineno);
      if (i == j) throw ParseError("self-loop on vertex " + tok[1], lineno);
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw ParseError("edge weight must be nonnegative and finite", lineno);
      }
      if (i > j) std::swap(i, j);
      if (auto it = seen.find({i, j}); it != seen.end()) {
        warnings.push_back("line " + std::to_string(lineno) + ": edge (" +
                           std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") redefined (first at line " + std::to_string(it->second) +
                           "); keeping last weight");
      }
      seen[{i, j}] = lineno;
      w(i, j) = w(j, i) = weight;
    } else if (kind == "k") {
      if (tok.size() != 2) throw ParseError("capacity line must be 'k <W>'", lineno);
      if (capacity) throw ParseError("duplicate capacity line", lineno);
      capacity = parse_number(tok[1], lineno);
      a = Eigen::VectorXd::Zero(n);
      has_weight.assign(n, false);
    } else if (kind == "v") {
      if (!capacity) throw ParseError("vertex weight before 'k <W>' line", lineno);
      if (tok.size() != 3) throw ParseError("vertex line must be 'v <i> <a_i>'", lineno);
      const int i = parse_index(tok[1], n, lineno);
      if (has_weight[i]) throw ParseError("duplicate weight for vertex " + tok[1], lineno);
      a(i) = parse_number(tok[2], lineno);
      has_weight[i] = true;
    } else {
      throw ParseError("unknown record type '" + kind + "'", lineno);
    }
  }
  if (n < 0) throw ParseError("empty instance: no 'gp' header", lineno);
  if (static_cast<int>(seen.size()) != declared_edges) {
    warnings.push_back("header declares " + std::to_string(declared_edges) + " edges, found " +
                       std::to_string(seen.size()));
  }

  InstanceData data{GraphInstance(std::move(w), std::move(name)), std::nullopt,
                    std::move(warnings)};
  if (capacity) {
    for (int i = 0; i < n; ++i) {
      if (!has_weight[i]) {
        throw ParseError("missing weight for vertex " + std::to_string(i + 1), lineno);
      }
    }
    Gpkc spec{std::move(a), *capacity};
    validate_spec(spec, n);
    data.gpkc = std::move(spec);
  }
  return data;
}

InstanceData read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file " + path);
  InstanceData data = read_instance(in);
  if (data.graph.name().empty()) {
    data.graph.set_name(std::filesystem::path(path).stem().string());
  }
  return data;
}

void write_instance(std::ostream& out, const GraphInstance& g, const std::optional<Gpkc>& gpkc) {
  if (!g.name().empty()) out << kNamePrefix << g.name() << '\n';
  out << "gp " << g.n() << ' ' << g.num_edges() << '\n';
  for (int i = 0; i < g.n(); ++i) {
    for (int j = i + 1; j < g.n(); ++j) {
      if (g.weight(i, j) != 0.0) {
        out << "e " << i + 1 << ' ' << j + 1 << ' ' << format_number(g.weight(i, j)) << '\n';
      }
    }
  }
  if (gpkc) {
    out << "k " << format_number(gpkc->W) << '\n';
    for (int i = 0; i < g.n(); ++i) out << "v " << i + 1 << ' ' << format_number(gpkc->a(i)) << '\n';
  }
}

void write_instance_file(const std::string& path, const GraphInstance& g,
                         const std::optional<Gpkc>& gpkc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write instance file " + path);
  write_instance(out, g, gpkc);
}

}  // namespace gpbound
