#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpbound/graph.hpp"

namespace gpbound {

// Text instance format:
//
//   # comment
//   gp <n> <num_edges>
//   e <i> <j> <w>        one line per edge, 1-based vertices
//   k <W>                optional GPKC block: capacity ...
//   v <i> <a_i>          ... followed by n vertex-weight lines
//
// A repeated edge keeps the last weight and produces a warning.
struct InstanceData {
  GraphInstance graph;
  std::optional<Gpkc> gpkc;
  std::vector<std::string> warnings;
};

InstanceData read_instance(std::istream& in, std::string name = {});
InstanceData read_instance_file(const std::string& path);

void write_instance(std::ostream& out, const GraphInstance& g,
                    const std::optional<Gpkc>& gpkc = std::nullopt);
void write_instance_file(const std::string& path, const GraphInstance& g,
                         const std::optional<Gpkc>& gpkc = std::nullopt);

}  // namespace gpbound
