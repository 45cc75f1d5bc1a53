#include <algorithm>
#include <functional>
#include <set>

#include "hyperset/bisim.hpp"
#include "hyperset/dsl.hpp"

namespace hyperset::dsl {
namespace {

// Shared acyclic sub-terms larger than this many nodes get a let name
// instead of being repeated.
constexpr std::size_t kInlineLimit = 16;

// Above this size members are listed in canonical node order instead of
// by member code, which costs one canonical form per node.
constexpr std::size_t kCodeOrderLimit = 4096;

// Nodes lying on a cycle (Tarjan SCC, iterative).
std::vector<bool> cyclic_nodes(const ApGraph& g) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false), cyclic(n, false);
  std::vector<NodeId> scc_stack;
  std::vector<std::pair<NodeId, std::size_t>> call;
  std::uint32_t counter = 0;
  for (NodeId start = 0; start < n; ++start) {
    if (index[start] != kUnset) continue;
    call.emplace_back(start, 0);
    index[start] = low[start] = counter++;
    scc_stack.push_back(start);
    on_stack[start] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      auto kids = g.children(v);
      if (i < kids.size()) {
        const NodeId w = kids[i++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          scc_stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<NodeId> component;
        NodeId w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != done);
        const bool self_loop = std::ranges::binary_search(g.children(done), done);
        if (component.size() > 1 || self_loop)
          for (NodeId c : component) cyclic[c] = true;
      }
    }
  }
  return cyclic;
}

class Printer {
 public:
  explicit Printer(const ApGraph& g) : g_(g), named_(cyclic_nodes(g)) {
    order_children();
    mark_heavy_shared();
    assign_names();
  }

  std::string print() const {
    if (order_.empty()) return body(g_.root());
    std::string out = "let ";
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (i > 0) out += "; ";
      out += name_[order_[i]];
      out += " = ";
      out += body(order_[i]);
    }
    out += " in ";
    out += name_[g_.root()];
    return out;
  }

 private:
  // Atoms first by name, then sets by the code of the set they denote.
  void order_children() {
    const std::size_t n = g_.node_count();
    rank_.resize(n);
    for (NodeId v = 0; v < n; ++v) rank_[v] = v;
    if (n <= kCodeOrderLimit) {
      std::vector<std::string> key(n);
      for (NodeId v = 0; v < n; ++v) {
        if (auto a = atom_of(g_.kind(v)))
          key[v] = std::string(1, '\0') + a->name();
        else
          key[v] = std::string(1, '\1') + canonical_code(rooted_at(g_, v)).bytes();
      }
      std::vector<NodeId> by_key(rank_);
      std::ranges::sort(by_key, [&](NodeId a, NodeId b) { return key[a] < key[b]; });
      for (std::size_t i = 0; i < n; ++i) rank_[by_key[i]] = static_cast<NodeId>(i);
    }
    kids_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      auto c = g_.children(v);
      kids_[v].assign(c.begin(), c.end());
      std::ranges::sort(kids_[v], [&](NodeId a, NodeId b) { return rank_[a] < rank_[b]; });
    }
  }

  void mark_heavy_shared() {
    const std::size_t n = g_.node_count();
    std::vector<std::size_t> indegree(n, 0);
    for (NodeId v = 0; v < n; ++v)
      for (NodeId c : g_.children(v)) ++indegree[c];
    // post-order over the acyclic part; named children count as one node
    std::vector<std::size_t> size(n, 0);
    std::vector<bool> visited(n, false);
    std::function<std::size_t(NodeId)> expand = [&](NodeId v) -> std::size_t {
      if (visited[v]) return named_[v] ? 1 : size[v];
      visited[v] = true;
      std::size_t total = 1;
      for (NodeId c : g_.children(v)) total = std::min<std::size_t>(total + expand(c), 1u << 30);
      size[v] = total;
      if (!named_[v] && indegree[v] >= 2 && total > kInlineLimit) named_[v] = true;
      return named_[v] ? 1 : total;
    };
    expand(g_.root());
  }

  void assign_names() {
    bool any = false;
    for (NodeId v = 0; v < g_.node_count(); ++v) any = any || named_[v];
    if (!any) return;
    named_[g_.root()] = true;

    std::set<std::string> taken;
    for (const NodeKind& k : g_.kinds())
      if (auto a = atom_of(k)) taken.insert(a->name());
    name_.assign(g_.node_count(), {});
    order_.push_back(g_.root());
    for (NodeId v = 0; v < g_.node_count(); ++v)
      if (named_[v] && v != g_.root()) order_.push_back(v);
    std::sort(order_.begin() + 1, order_.end(), [&](NodeId a, NodeId b) { return rank_[a] < rank_[b]; });
    std::size_t counter = 0;
    for (NodeId v : order_) {
      std::string candidate;
      do candidate = "v" + std::to_string(counter++);
      while (taken.contains(candidate));
      name_[v] = candidate;
    }
  }

  std::string term(NodeId v) const {
    if (auto a = atom_of(g_.kind(v))) return a->name();
    if (!name_.empty() && named_[v]) return name_[v];
    return body(v);
  }

  std::string body(NodeId v) const {
    std::string out = "{";
    bool first = true;
    for (NodeId c : kids_[v]) {
      if (!first) out += ", ";
      first = false;
      out += term(c);
    }
    out += "}";
    return out;
  }

  const ApGraph& g_;
  std::vector<bool> named_;
  std::vector<std::string> name_;
  std::vector<NodeId> order_;
  std::vector<NodeId> rank_;
  std::vector<std::vector<NodeId>> kids_;
};

}  // namespace

std::string print_expr(const HSet& a) { return Printer(a.graph()).print(); }

std::string print_canonical(const HSet& a) {
  const AtomSet atoms = support(a);
  if (atoms.empty()) return print_expr(a);
  std::vector<std::string> names;
  for (const Atom& x : atoms) names.push_back(x.name());
  std::sort(names.begin(), names.end());
  std::string out = "atoms ";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  out += "; ";
  out += print_expr(a);
  return out;
}

std::string print_element(const Element& e) {
  if (const Atom* a = as_atom(e)) return a->name();
  return print_expr(std::get<HSet>(e));
}

}  // namespace hyperset::dsl
