#include "hyperset/graph.hpp"

#include <algorithm>
#include <string>

#include "hyperset/error.hpp"

namespace hyperset {

ApGraph::ApGraph() : kinds_{SetNode{}}, offsets_{0, 0}, root_(0) {}

std::vector<Edge> ApGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(targets_.size());
  for (NodeId n = 0; n < node_count(); ++n)
    for (NodeId c : children(n)) out.emplace_back(n, c);
  return out;
}

ApGraph build_graph(std::vector<NodeKind> node_kinds, std::span<const Edge> edges, NodeId root,
                    const Limits& limits) {
  const std::size_t n = node_kinds.size();
  if (n > limits.node_budget)
    throw Error(Errc::SizeLimit, "graph has " + std::to_string(n) + " nodes, budget is " +
                                     std::to_string(limits.node_budget));
  if (root >= n) throw Error(Errc::BadIndex, "root " + std::to_string(root) + " out of range");

  std::vector<std::uint32_t> degree(n + 1, 0);
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n)
      throw Error(Errc::BadIndex, "edge " + std::to_string(from) + " -> " + std::to_string(to) +
                                      " out of range");
    if (is_atom(node_kinds[from]))
      throw Error(Errc::EdgeFromAtom, "atom leaf " + std::to_string(from) + " has an out-edge");
    ++degree[from + 1];
  }
  for (std::size_t i = 0; i < n; ++i) degree[i + 1] += degree[i];
  std::vector<NodeId> adj(edges.size());
  {
    std::vector<std::uint32_t> fill(degree.begin(), degree.end() - 1);
    for (const auto& [from, to] : edges) adj[fill[from]++] = to;
  }

  // reachability from root
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (std::uint32_t i = degree[v]; i < degree[v + 1]; ++i) {
      if (!seen[adj[i]]) {
        seen[adj[i]] = true;
        stack.push_back(adj[i]);
      }
    }
  }

  constexpr NodeId kDropped = ~NodeId{0};
  std::vector<NodeId> remap(n, kDropped);
  NodeId next = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (seen[v]) remap[v] = next++;

  ApGraph g;
  g.kinds_.clear();
  g.kinds_.reserve(next);
  g.offsets_.assign(1, 0);
  g.offsets_.reserve(next + 1);
  g.targets_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) continue;
    g.kinds_.push_back(std::move(node_kinds[v]));
    const std::size_t start = g.targets_.size();
    for (std::uint32_t i = degree[v]; i < degree[v + 1]; ++i) g.targets_.push_back(remap[adj[i]]);
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(start);
    std::sort(first, g.targets_.end());
    g.targets_.erase(std::unique(first, g.targets_.end()), g.targets_.end());
    g.offsets_.push_back(static_cast<std::uint32_t>(g.targets_.size()));
  }
  g.root_ = remap[root];
  return g;
}

bool is_well_founded_graph(const ApGraph& g) {
  // iterative DFS; a grey successor is a back edge, i.e. a reachable cycle
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> color(g.node_count(), kWhite);
  std::vector<std::pair<NodeId, std::uint32_t>> stack{{g.root(), 0}};
  color[g.root()] = kGrey;
  while (!stack.empty()) {
    auto& [v, next_child] = stack.back();
    auto kids = g.children(v);
    if (next_child == kids.size()) {
      color[v] = kBlack;
      stack.pop_back();
      continue;
    }
    NodeId c = kids[next_child++];
    if (color[c] == kGrey) return false;
    if (color[c] == kWhite) {
      color[c] = kGrey;
      stack.emplace_back(c, 0);
    }
  }
  return true;
}

ApGraph with_root(const ApGraph& g, NodeId root) {
  if (root >= g.node_count()) throw Error(Errc::BadIndex, "root out of range");
  auto kinds = std::vector<NodeKind>(g.kinds().begin(), g.kinds().end());
  auto edges = g.edges();
  Limits unlimited;
  unlimited.node_budget = std::max(unlimited.node_budget, g.node_count());
  return build_graph(std::move(kinds), edges, root, unlimited);
}

ApGraph rooted_at(const ApGraph& g, NodeId n) { return with_root(g, n); }

void GraphAssembler::reserve_one() {
  if (kinds_.size() >= limits_.node_budget)
    throw Error(Errc::SizeLimit,
                "node budget of " + std::to_string(limits_.node_budget) + " exceeded");
}

NodeId GraphAssembler::add_set() {
  reserve_one();
  kinds_.emplace_back(SetNode{});
  return static_cast<NodeId>(kinds_.size() - 1);
}

NodeId GraphAssembler::add_atom(const Atom& a) {
  if (auto it = atom_nodes_.find(a); it != atom_nodes_.end()) return it->second;
  reserve_one();
  kinds_.emplace_back(AtomLeaf{a});
  const auto id = static_cast<NodeId>(kinds_.size() - 1);
  atom_nodes_.emplace(a, id);
  return id;
}

NodeId GraphAssembler::import(const ApGraph& g) { return import_all(g)[g.root()]; }

std::vector<NodeId> GraphAssembler::import_all(const ApGraph& g) {
  std::vector<NodeId> ids(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeKind& k = g.kind(v);
    ids[v] = is_atom(k) ? add_atom(std::get<AtomLeaf>(k).atom) : add_set();
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId c : g.children(v)) add_edge(ids[v], ids[c]);
  return ids;
}

ApGraph GraphAssembler::finish(NodeId root) && {
  return build_graph(std::move(kinds_), edges_, root, limits_);
}

}  // namespace hyperset
