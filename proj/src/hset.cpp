#include "hyperset/hset.hpp"

#include <algorithm>
#include <mutex>
#include <string>
#include <unordered_map>

#include "hyperset/error.hpp"

namespace hyperset {

struct HSet::Rep {
  ApGraph graph;
  CanonicalCode code;
};

namespace {

struct InternTable {
  std::mutex mutex;
  std::unordered_map<std::string, std::weak_ptr<const HSet::Rep>> entries;
  std::size_t sweep_at = 1024;
};

InternTable& intern_table() {
  static InternTable t;
  return t;
}

// Imports an element into an assembler and returns its node.
NodeId place(GraphAssembler& as, const Element& e) {
  if (const Atom* a = as_atom(e)) return as.add_atom(*a);
  return as.import(std::get<HSet>(e).graph());
}

Element element_at(const ApGraph& g, NodeId n) {
  if (auto a = atom_of(g.kind(n))) return *a;
  return HSet::from_graph(rooted_at(g, n));
}

}  // namespace

HSet::HSet() : HSet(from_graph(ApGraph{})) {}

HSet HSet::from_graph(const ApGraph& g, const Limits& limits) {
  if (is_atom(g.kind(g.root()))) throw Error(Errc::NotASet, "root of graph is an atom");
  CanonicalForm form = canonical_form(g, limits);

  InternTable& t = intern_table();
  std::lock_guard lock(t.mutex);
  auto& slot = t.entries[form.code.bytes()];
  if (auto live = slot.lock()) return HSet(std::move(live));
  auto rep = std::make_shared<const Rep>(Rep{std::move(form.graph), std::move(form.code)});
  slot = rep;
  if (t.entries.size() >= t.sweep_at) {
    std::erase_if(t.entries, [](const auto& kv) { return kv.second.expired(); });
    t.sweep_at = std::max<std::size_t>(1024, 2 * t.entries.size());
  }
  return HSet(std::move(rep));
}

const ApGraph& HSet::graph() const noexcept { return rep_->graph; }
const CanonicalCode& HSet::code() const noexcept { return rep_->code; }

bool operator==(const HSet& a, const HSet& b) noexcept {
  return a.rep_ == b.rep_ || a.rep_->code == b.rep_->code;
}

std::strong_ordering operator<=>(const HSet& a, const HSet& b) noexcept {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  return a.rep_->code <=> b.rep_->code;
}

HSet empty() {
  static const HSet phi = HSet::from_graph(ApGraph{});
  return phi;
}

HSet omega() {
  static const HSet value = [] {
    const Edge loop{0, 0};
    return HSet::from_graph(build_graph({SetNode{}}, std::span(&loop, 1), 0));
  }();
  return value;
}

HSet set_of(std::span<const Element> elems, const Limits& limits) {
  GraphAssembler as(limits);
  const NodeId root = as.add_set();
  for (const Element& e : elems) as.add_edge(root, place(as, e));
  return HSet::from_graph(std::move(as).finish(root), limits);
}

std::vector<Element> elements(const HSet& a) {
  const ApGraph& g = a.graph();
  std::vector<Element> out;
  for (NodeId c : g.children(g.root())) out.push_back(element_at(g, c));
  std::ranges::sort(out, [](const Element& x, const Element& y) {
    const Atom* ax = as_atom(x);
    const Atom* ay = as_atom(y);
    if (ax && ay) return ax->name() < ay->name();
    if (ax || ay) return ax != nullptr;
    return std::get<HSet>(x) < std::get<HSet>(y);
  });
  return out;
}

bool contains(const HSet& a, const Element& e) {
  const ApGraph& g = a.graph();
  auto kids = g.children(g.root());
  if (const Atom* atom = as_atom(e)) {
    return std::ranges::any_of(kids, [&](NodeId c) {
      auto x = atom_of(g.kind(c));
      return x && *x == *atom;
    });
  }
  const HSet& s = std::get<HSet>(e);
  // a member's minimal graph is a sub-graph of the minimal graph of a
  if (s.graph().node_count() > g.node_count()) return false;
  for (NodeId c : kids) {
    if (is_atom(g.kind(c))) continue;
    if (HSet::from_graph(rooted_at(g, c)) == s) return true;
  }
  return false;
}

bool is_subset(const HSet& a, const HSet& b) {
  for (const Element& e : elements(a))
    if (!contains(b, e)) return false;
  return true;
}

HSet set_union(const HSet& a, const HSet& b, const Limits& limits) {
  GraphAssembler as(limits);
  const NodeId root = as.add_set();
  for (const HSet* s : {&a, &b}) {
    const auto ids = as.import_all(s->graph());
    for (NodeId c : s->graph().children(s->graph().root())) as.add_edge(root, ids[c]);
  }
  return HSet::from_graph(std::move(as).finish(root), limits);
}

HSet union_all(const HSet& a, const Limits& limits) {
  const ApGraph& g = a.graph();
  GraphAssembler as(limits);
  const NodeId root = as.add_set();
  const auto ids = as.import_all(g);
  for (NodeId c : g.children(g.root()))
    for (NodeId gc : g.children(c)) as.add_edge(root, ids[gc]);
  return HSet::from_graph(std::move(as).finish(root), limits);
}

HSet power_set(const HSet& a, const Limits& limits) {
  const ApGraph& g = a.graph();
  auto kids = g.children(g.root());
  const std::size_t k = kids.size();
  if (k > limits.power_set_bound)
    throw Error(Errc::SizeLimit, "power set of a set with " + std::to_string(k) +
                                     " members exceeds bound " +
                                     std::to_string(limits.power_set_bound));
  GraphAssembler as(limits);
  const NodeId root = as.add_set();
  const auto ids = as.import_all(g);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    const NodeId subset = as.add_set();
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) as.add_edge(subset, ids[kids[i]]);
    as.add_edge(root, subset);
  }
  return HSet::from_graph(std::move(as).finish(root), limits);
}

HSet kpair(const Element& a, const Element& b) {
  return set_of({set_of({a}), set_of({a, b})});
}

namespace {

std::optional<std::pair<Element, Element>> try_pair_components(const HSet& p) {
  const std::vector<Element> members = elements(p);
  if (members.empty() || members.size() > 2) return std::nullopt;
  for (const Element& m : members)
    if (!as_set(m)) return std::nullopt;
  std::optional<std::pair<Element, Element>> out;
  if (members.size() == 1) {
    const auto inner = elements(std::get<HSet>(members[0]));
    if (inner.size() != 1) return std::nullopt;
    out.emplace(inner[0], inner[0]);
  } else {
    const auto first = elements(std::get<HSet>(members[0]));
    const auto second = elements(std::get<HSet>(members[1]));
    const std::vector<Element>* single = nullptr;
    const std::vector<Element>* twin = nullptr;
    if (first.size() == 1 && second.size() == 2) {
      single = &first;
      twin = &second;
    } else if (second.size() == 1 && first.size() == 2) {
      single = &second;
      twin = &first;
    } else {
      return std::nullopt;
    }
    const Element& a = (*single)[0];
    if ((*twin)[0] == a)
      out.emplace(a, (*twin)[1]);
    else if ((*twin)[1] == a)
      out.emplace(a, (*twin)[0]);
    else
      return std::nullopt;
  }
  if (kpair(out->first, out->second) != p) return std::nullopt;
  return out;
}

}  // namespace

std::pair<Element, Element> pair_components(const HSet& p) {
  auto parts = try_pair_components(p);
  if (!parts) throw Error(Errc::NotAPair, "set is not a Kuratowski pair");
  return *parts;
}

namespace {

std::optional<std::vector<std::pair<Element, Element>>> pairs_of(const HSet& r) {
  std::vector<std::pair<Element, Element>> out;
  for (const Element& m : elements(r)) {
    const HSet* s = as_set(m);
    if (!s) return std::nullopt;
    auto parts = try_pair_components(*s);
    if (!parts) return std::nullopt;
    out.push_back(std::move(*parts));
  }
  return out;
}

}  // namespace

std::pair<HSet, HSet> dom_rng(const HSet& r) {
  auto pairs = pairs_of(r);
  if (!pairs) throw Error(Errc::NotARelation, "set has a member that is not a pair");
  std::vector<Element> firsts, seconds;
  for (auto& [a, b] : *pairs) {
    firsts.push_back(a);
    seconds.push_back(b);
  }
  return {set_of(firsts), set_of(seconds)};
}

bool is_relation(const HSet& r) { return pairs_of(r).has_value(); }

bool is_function(const HSet& r) {
  auto pairs = pairs_of(r);
  if (!pairs) return false;
  for (std::size_t i = 0; i < pairs->size(); ++i)
    for (std::size_t j = i + 1; j < pairs->size(); ++j)
      if ((*pairs)[i].first == (*pairs)[j].first && (*pairs)[i].second != (*pairs)[j].second)
        return false;
  return true;
}

HSet natural(std::size_t n, const Limits& limits) {
  if (n > limits.natural_bound)
    throw Error(Errc::SizeLimit, "natural " + std::to_string(n) + " exceeds bound " +
                                     std::to_string(limits.natural_bound));
  std::vector<NodeKind> kinds(n + 1, SetNode{});
  std::vector<Edge> edges;
  for (NodeId i = 0; i <= n; ++i)
    for (NodeId j = 0; j < i; ++j) edges.emplace_back(i, j);
  return HSet::from_graph(build_graph(std::move(kinds), edges, static_cast<NodeId>(n),
                                      limits),
                          limits);
}

std::size_t as_natural(const HSet& a) {
  // n is a numeral iff its minimal graph has n+1 set nodes with pairwise
  // distinct out-degrees 0..n and each node's children are exactly the
  // nodes of smaller degree.
  const ApGraph& g = a.graph();
  const std::size_t n = g.node_count() - 1;
  std::vector<NodeId> by_degree(n + 1, ~NodeId{0});
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (is_atom(g.kind(v))) throw Error(Errc::NotANatural, "numeral contains an atom");
    const std::size_t d = g.children(v).size();
    if (d > n || by_degree[d] != ~NodeId{0})
      throw Error(Errc::NotANatural, "set is not a von Neumann numeral");
    by_degree[d] = v;
  }
  for (std::size_t d = 0; d <= n; ++d) {
    auto kids = g.children(by_degree[d]);
    for (NodeId c : kids)
      if (g.children(c).size() >= d) throw Error(Errc::NotANatural, "set is not a von Neumann numeral");
  }
  if (g.children(g.root()).size() != n) throw Error(Errc::NotANatural, "set is not a von Neumann numeral");
  return n;
}

HSet disjoint_union(const HSet& a, const HSet& b, const Limits& limits) {
  const Element zero = natural(0), one = natural(1);
  std::vector<Element> tagged;
  for (const Element& x : elements(a)) tagged.push_back(kpair(zero, x));
  for (const Element& y : elements(b)) tagged.push_back(kpair(one, y));
  return set_of(tagged, limits);
}

HSet cartesian_product(const HSet& a, const HSet& b, const Limits& limits) {
  const auto xs = elements(a);
  const auto ys = elements(b);
  std::vector<Element> pairs;
  for (const Element& x : xs)
    for (const Element& y : ys) pairs.push_back(kpair(x, y));
  return set_of(pairs, limits);
}

HSet function_space(const HSet& a, const HSet& b, const Limits& limits) {
  const auto xs = elements(a);
  const auto ys = elements(b);
  if (xs.empty()) return set_of({empty()});
  if (ys.empty()) return empty();
  double total = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) total *= static_cast<double>(ys.size());
  if (total > static_cast<double>(std::uint64_t{1} << std::min<std::size_t>(limits.power_set_bound, 62)))
    throw Error(Errc::SizeLimit, "function space too large");

  std::vector<std::vector<Element>> pair_table(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (const Element& y : ys) pair_table[i].push_back(kpair(xs[i], y));

  std::vector<Element> functions;
  std::vector<std::size_t> choice(xs.size(), 0);
  std::vector<Element> graph_of_f(xs.size());
  for (;;) {
    for (std::size_t i = 0; i < xs.size(); ++i) graph_of_f[i] = pair_table[i][choice[i]];
    functions.push_back(set_of(graph_of_f, limits));
    std::size_t i = 0;
    while (i < xs.size() && ++choice[i] == ys.size()) choice[i++] = 0;
    if (i == xs.size()) break;
  }
  return set_of(functions, limits);
}

HSet tc(const HSet& a, const Limits& limits) {
  const ApGraph& g = a.graph();
  std::vector<bool> reached(g.node_count(), false);
  std::vector<NodeId> stack(g.children(g.root()).begin(), g.children(g.root()).end());
  for (NodeId c : stack) reached[c] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId c : g.children(v))
      if (!reached[c]) {
        reached[c] = true;
        stack.push_back(c);
      }
  }
  GraphAssembler as(limits);
  const NodeId root = as.add_set();
  const auto ids = as.import_all(g);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (reached[v]) as.add_edge(root, ids[v]);
  return HSet::from_graph(std::move(as).finish(root), limits);
}

HSet tc_closure_of_singleton(const Element& a, const Limits& limits) {
  const HSet single = set_of(std::span<const Element>(&a, 1), limits);
  if (const HSet* s = as_set(a)) return set_union(single, tc(*s, limits), limits);
  return single;
}

bool is_transitive(const HSet& a) {
  for (const Element& e : elements(a)) {
    const HSet* s = as_set(e);
    if (s && !is_subset(*s, a)) return false;
  }
  return true;
}

AtomSet support(const HSet& a) {
  AtomSet out;
  for (const NodeKind& k : a.graph().kinds())
    if (auto x = atom_of(k)) out.insert(*x);
  return out;
}

bool is_pure(const HSet& a) { return support(a).empty(); }

bool in_v_afa(const HSet& a, const AtomSet& atoms) {
  return std::ranges::includes(atoms, support(a));
}

bool is_well_founded_set(const HSet& a) { return is_well_founded_graph(a.graph()); }

HSet substitute(const HSet& a, const std::map<Atom, Element>& by, const Limits& limits) {
  const ApGraph& g = a.graph();
  GraphAssembler as(limits);
  std::vector<NodeId> ids(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (auto x = atom_of(g.kind(v))) {
      auto it = by.find(*x);
      ids[v] = it == by.end() ? as.add_atom(*x) : place(as, it->second);
    } else {
      ids[v] = as.add_set();
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId c : g.children(v)) as.add_edge(ids[v], ids[c]);
  return HSet::from_graph(std::move(as).finish(ids[g.root()]), limits);
}

ApGraph picture(const HSet& a) { return a.graph(); }

std::vector<Element> decorate(const ApGraph& g) {
  const Partition p = coarsest_bisimulation(g);
  const ApGraph q = quotient(g);  // node b of q is block b
  std::vector<Element> per_block;
  per_block.reserve(q.node_count());
  for (NodeId b = 0; b < q.node_count(); ++b) per_block.push_back(element_at(q, b));
  std::vector<Element> out;
  out.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) out.push_back(per_block[p.block_of[v]]);
  return out;
}

}  // namespace hyperset
