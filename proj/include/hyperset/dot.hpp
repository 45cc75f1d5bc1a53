#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hyperset/graph.hpp"

namespace hyperset {

// Graphviz subset used for graph interchange:
//
//   digraph H {
//     n0 [shape=circle, root=true];
//     a0 [shape=box, label="p"];
//     n0 -> a0;
//   }
//
// Set nodes are circles named n<k>, atom leaves are boxes named a<k>
// carrying the atom name as label. Exactly one node has root=true.
std::string to_dot(const ApGraph& g);

struct DotGraph {
  ApGraph graph;
  // DOT identifier of every node of `graph`, by NodeId
  std::vector<std::string> names;
};

// Parses the subset above. Errors: Errc::ParseError with position,
// Errc::MissingRoot / Errc::AmbiguousRoot for zero or several roots.
DotGraph parse_dot(std::string_view text, const Limits& limits = {});

inline ApGraph from_dot(std::string_view text, const Limits& limits = {}) {
  return parse_dot(text, limits).graph;
}

}  // namespace hyperset
