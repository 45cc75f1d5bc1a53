#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "hyperset/atom.hpp"
#include "hyperset/bisim.hpp"
#include "hyperset/graph.hpp"
#include "hyperset/limits.hpp"

namespace hyperset {

// A hyperset: the bisimulation class of an accessible pointed graph, held
// as its canonical minimal picture. Values are immutable and interned by
// canonical code, so copies are cheap and equality is a key comparison.
// An HSet is always a set; atoms occur only as leaves inside.
class HSet {
 public:
  HSet();  // the empty set

  // Throws Errc::NotASet if the root of `g` is an atom leaf.
  static HSet from_graph(const ApGraph& g, const Limits& limits = {});

  const ApGraph& graph() const noexcept;
  const CanonicalCode& code() const noexcept;
  // number of distinct members
  std::size_t size() const noexcept { return graph().children(graph().root()).size(); }

  friend bool operator==(const HSet& a, const HSet& b) noexcept;
  friend std::strong_ordering operator<=>(const HSet& a, const HSet& b) noexcept;

  // Opaque shared representation.
  struct Rep;

 private:
  explicit HSet(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

using Element = std::variant<HSet, Atom>;
using AtomSet = std::set<Atom>;

inline const HSet* as_set(const Element& e) noexcept { return std::get_if<HSet>(&e); }
inline const Atom* as_atom(const Element& e) noexcept { return std::get_if<Atom>(&e); }

HSet empty();
HSet omega();

// Duplicates and order in `elems` are irrelevant.
HSet set_of(std::span<const Element> elems, const Limits& limits = {});
inline HSet set_of(std::initializer_list<Element> elems) {
  return set_of(std::span<const Element>(elems.begin(), elems.size()));
}

// Members: atoms by name, then sets by canonical code.
std::vector<Element> elements(const HSet& a);
bool contains(const HSet& a, const Element& e);
inline bool eq(const HSet& a, const HSet& b) { return a == b; }
bool is_subset(const HSet& a, const HSet& b);

HSet set_union(const HSet& a, const HSet& b, const Limits& limits = {});
// Members of members; atom members contribute nothing.
HSet union_all(const HSet& a, const Limits& limits = {});
// Throws Errc::SizeLimit when a has more than limits.power_set_bound members.
HSet power_set(const HSet& a, const Limits& limits = {});

// Kuratowski pair {{a}, {a, b}}.
HSet kpair(const Element& a, const Element& b);
// Throws Errc::NotAPair unless p = kpair(a, b) for some a, b.
std::pair<Element, Element> pair_components(const HSet& p);

// Throws Errc::NotARelation unless every member is a Kuratowski pair.
std::pair<HSet, HSet> dom_rng(const HSet& r);
bool is_relation(const HSet& r);
bool is_function(const HSet& r);

// von Neumann numeral; throws Errc::SizeLimit above limits.natural_bound.
HSet natural(std::size_t n, const Limits& limits = {});
// Throws Errc::NotANatural.
std::size_t as_natural(const HSet& a);

// {<0, x> | x in a} u {<1, y> | y in b}
HSet disjoint_union(const HSet& a, const HSet& b, const Limits& limits = {});
HSet cartesian_product(const HSet& a, const HSet& b, const Limits& limits = {});
// All functions a -> b as sets of pairs. Throws Errc::SizeLimit when
// |b|^|a| exceeds 2^limits.power_set_bound.
HSet function_space(const HSet& a, const HSet& b, const Limits& limits = {});

// Transitive closure: everything reachable by one or more membership steps.
HSet tc(const HSet& a, const Limits& limits = {});
// Smallest transitive set with `a` as a member: {a} u tc(a).
HSet tc_closure_of_singleton(const Element& a, const Limits& limits = {});
bool is_transitive(const HSet& a);

AtomSet support(const HSet& a);
bool is_pure(const HSet& a);
bool in_v_afa(const HSet& a, const AtomSet& atoms);
bool is_well_founded_set(const HSet& a);

// Replaces atoms by elements throughout a (atoms not in `by` stay).
HSet substitute(const HSet& a, const std::map<Atom, Element>& by, const Limits& limits = {});

ApGraph picture(const HSet& a);
// The unique decoration: one element per node of g.
std::vector<Element> decorate(const ApGraph& g);

}  // namespace hyperset
