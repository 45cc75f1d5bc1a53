#pragma once

// Independent reference implementations and generators shared by the unit
// and acceptance suites. Nothing here calls into bisim or canonical code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hyperset/graph.hpp"
#include "hyperset/hset.hpp"

namespace oracle {

using hyperset::ApGraph;
using hyperset::Atom;
using hyperset::Edge;
using hyperset::NodeId;
using hyperset::NodeKind;

// Greatest bisimulation by brute-force fixpoint over the full relation,
// returned as block ids numbered by first occurrence.
inline std::vector<std::uint32_t> naive_bisimulation(const ApGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> rel(n * n, 0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v) rel[u * n + v] = g.kind(u) == g.kind(v);

  auto simulated = [&](NodeId u, NodeId v) {
    for (NodeId c : g.children(u)) {
      bool found = false;
      for (NodeId d : g.children(v))
        if (rel[c * n + d]) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v)
        if (rel[u * n + v] && !(simulated(u, v) && simulated(v, u))) {
          rel[u * n + v] = rel[v * n + u] = 0;
          changed = true;
        }
  }
  std::vector<std::uint32_t> block(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (block[u] != UINT32_MAX) continue;
    for (NodeId v = u; v < n; ++v)
      if (rel[u * n + v]) block[v] = next;
    ++next;
  }
  return block;
}

// Bottom-up extensional evaluation of a well-founded graph: equal ids iff
// equal sets. Atoms map to ids tagged by their uid.
inline std::vector<std::int64_t> mostowski_ids(const ApGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int64_t> id(n, INT64_MIN);
  std::map<std::vector<std::int64_t>, std::int64_t> interned;
  std::vector<std::pair<NodeId, bool>> stack{{g.root(), false}};
  for (NodeId v = 0; v < n; ++v) stack.emplace_back(v, false);
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (id[v] != INT64_MIN) continue;
    if (auto a = hyperset::atom_of(g.kind(v))) {
      id[v] = -1 - static_cast<std::int64_t>(a->uid());
      continue;
    }
    if (!expanded) {
      stack.emplace_back(v, true);
      for (NodeId c : g.children(v))
        if (id[c] == INT64_MIN) stack.emplace_back(c, false);
      continue;
    }
    std::vector<std::int64_t> members;
    for (NodeId c : g.children(v)) members.push_back(id[c]);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    id[v] = interned.emplace(std::move(members), static_cast<std::int64_t>(interned.size())).first->second;
  }
  return id;
}

inline std::vector<Atom> atom_pool(std::size_t k) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(hyperset::intern_atom("t" + std::to_string(i)));
  return out;
}

struct GraphShape {
  std::size_t set_nodes = 5;
  std::size_t atom_leaves = 0;
  std::size_t edges = 8;
  bool acyclic = false;
};

// Root 0; edges leave set nodes only. Unreachable parts are trimmed by
// build_graph.
inline ApGraph random_graph(std::mt19937_64& rng, const GraphShape& shape,
                            const std::vector<Atom>& atoms = atom_pool(3)) {
  const std::size_t s = std::max<std::size_t>(shape.set_nodes, 1);
  std::vector<NodeKind> kinds(s, hyperset::SetNode{});
  for (std::size_t i = 0; i < shape.atom_leaves && !atoms.empty(); ++i)
    kinds.emplace_back(hyperset::AtomLeaf{atoms[rng() % atoms.size()]});
  const std::size_t n = kinds.size();
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < shape.edges; ++e) {
    NodeId from = static_cast<NodeId>(rng() % s);
    NodeId to = static_cast<NodeId>(rng() % n);
    if (shape.acyclic) {
      if (to < s && to <= from) {
        if (from + 1 >= s) {
          if (n == s) continue;
          to = static_cast<NodeId>(s + rng() % (n - s));
        } else {
          to = static_cast<NodeId>(from + 1 + rng() % (s - from - 1));
        }
      }
    }
    edges.emplace_back(from, to);
  }
  // Keep most of the graph reachable: chain every set node to a smaller one.
  for (NodeId v = 1; v < s; ++v)
    if (rng() % 4 != 0) {
      NodeId parent = static_cast<NodeId>(rng() % v);
      edges.emplace_back(parent, v);
    }
  return hyperset::build_graph(std::move(kinds), edges, 0);
}

inline hyperset::HSet random_hset(std::mt19937_64& rng, std::size_t max_nodes, bool allow_cycles,
                                  bool allow_atoms) {
  GraphShape shape;
  shape.set_nodes = 1 + rng() % max_nodes;
  shape.atom_leaves = allow_atoms ? rng() % 3 : 0;
  shape.edges = rng() % (2 * shape.set_nodes + 1);
  shape.acyclic = !allow_cycles || rng() % 2 == 0;
  return hyperset::HSet::from_graph(random_graph(rng, shape));
}

}  // namespace oracle
