#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "hyperset/atom.hpp"
#include "hyperset/limits.hpp"

namespace hyperset {

using NodeId = std::uint32_t;

struct SetNode {
  friend bool operator==(const SetNode&, const SetNode&) = default;
};

struct AtomLeaf {
  Atom atom;
  friend bool operator==(const AtomLeaf&, const AtomLeaf&) = default;
};

// A set-node with no children denotes the empty set; an atom leaf denotes
// its ur-element and never has children.
using NodeKind = std::variant<SetNode, AtomLeaf>;

inline bool is_atom(const NodeKind& k) noexcept { return std::holds_alternative<AtomLeaf>(k); }

inline std::optional<Atom> atom_of(const NodeKind& k) {
  if (const auto* leaf = std::get_if<AtomLeaf>(&k)) return leaf->atom;
  return std::nullopt;
}

using Edge = std::pair<NodeId, NodeId>;

// Accessible pointed graph. Immutable once built: every node is reachable
// from the root, atom leaves have no children and child lists are sorted
// and duplicate free. Only build_graph (or code that already guarantees
// these invariants) produces one.
class ApGraph {
 public:
  ApGraph();  // the one-node picture of the empty set

  std::size_t node_count() const noexcept { return kinds_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  NodeId root() const noexcept { return root_; }

  const NodeKind& kind(NodeId n) const { return kinds_[n]; }
  std::span<const NodeKind> kinds() const noexcept { return kinds_; }
  std::span<const NodeId> children(NodeId n) const {
    return {targets_.data() + offsets_[n], targets_.data() + offsets_[n + 1]};
  }

  std::vector<Edge> edges() const;

  friend bool operator==(const ApGraph&, const ApGraph&) = default;

 private:
  friend ApGraph build_graph(std::vector<NodeKind>, std::span<const Edge>, NodeId, const Limits&);
  friend class GraphAssembler;

  std::vector<NodeKind> kinds_;
  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> targets_;
  NodeId root_ = 0;
};

// Validates the input and returns its accessible restriction. Reachable
// nodes keep their relative order when re-indexed.
ApGraph build_graph(std::vector<NodeKind> node_kinds, std::span<const Edge> edges, NodeId root,
                    const Limits& limits = {});

// True iff no cycle is reachable from the root.
bool is_well_founded_graph(const ApGraph& g);

// Sub-graph accessible from `n`, re-rooted there.
ApGraph rooted_at(const ApGraph& g, NodeId n);

// Same nodes and edges, different root (which must be a valid id). Nodes
// the new root cannot reach are dropped.
ApGraph with_root(const ApGraph& g, NodeId root);

// Low-level builder for library code that assembles graphs from pieces of
// existing ones. finish() runs the same normalization as build_graph.
class GraphAssembler {
 public:
  explicit GraphAssembler(const Limits& limits = {}) : limits_(limits) {}

  NodeId add_set();
  NodeId add_atom(const Atom& a);
  void add_edge(NodeId from, NodeId to) { edges_.emplace_back(from, to); }
  // Copies every node of `g`, returning the id its root received.
  NodeId import(const ApGraph& g);
  // Like import(), but returns the new id of every node of `g`.
  std::vector<NodeId> import_all(const ApGraph& g);
  std::size_t node_count() const noexcept { return kinds_.size(); }

  ApGraph finish(NodeId root) &&;

 private:
  void reserve_one();

  Limits limits_;
  std::vector<NodeKind> kinds_;
  std::unordered_map<Atom, NodeId> atom_nodes_;
  std::vector<Edge> edges_;
};

}  // namespace hyperset
