#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hyperset/hset.hpp"

namespace hyperset {

// Right-hand side of a flat equation: the indeterminates and the atoms the
// left-hand side immediately depends on.
struct FlatEquation {
  std::set<std::string> variables;
  AtomSet atoms;

  friend bool operator==(const FlatEquation&, const FlatEquation&) = default;
};

// x = e_x for every x in `variables`, each e_x a subset of X u A.
// Indeterminates are names; the atoms are ur-elements, and no indeterminate
// shares a name with an atom.
struct FlatSystem {
  std::set<std::string> variables;
  AtomSet atoms;
  std::map<std::string, FlatEquation> equations;
};

using Solution = std::map<std::string, HSet>;

// Resolves every right-hand symbol to an indeterminate or an atom of A.
// Errors: NameClash, UnboundName, MissingEquation.
FlatSystem validate_flat(const std::vector<std::string>& variables, const std::vector<Atom>& atoms,
                         const std::map<std::string, std::vector<std::string>>& equations);

// The unique solution: decoration of the graph with one node per
// indeterminate and one leaf per atom.
Solution solve(const FlatSystem& system, const Limits& limits = {});

// Whether sol[v] = {sol[w] | w in b_v} u c_v holds for every v.
bool satisfies(const FlatSystem& system, const Solution& sol);

// Union of all solution values.
HSet solution_set(const Solution& sol, const Limits& limits = {});
inline HSet solution_set(const FlatSystem&, const Solution& sol, const Limits& limits = {}) {
  return solution_set(sol, limits);
}

// True iff the dependency relation "y in e_x" has no cycle.
bool is_well_founded_system(const FlatSystem& system);

// An atom outside `avoid`, distinct from every atom issued before.
inline Atom fresh(std::string_view hint, std::span<const Atom> avoid = {}) {
  return AtomTable::fresh(hint, avoid);
}

// x = e_x where e_x is any hyperset over X u A. Inside right-hand sides an
// indeterminate x is represented by the atom stand_ins.at(x).
struct GenSystem {
  std::set<std::string> variables;
  AtomSet atoms;
  std::map<std::string, Atom> stand_ins;
  std::map<std::string, HSet> equations;

  // Fresh stand-ins for `variables`; equations still to be filled in.
  static GenSystem over(const std::vector<std::string>& variables, AtomSet atoms);

  Element var(const std::string& name) const;
};

// Errors: NameClash, MissingEquation, UnboundName.
void validate_generalized(const GenSystem& system);

// Whether every right-hand side is a set of indeterminates and atoms.
bool is_generalized_flat(const GenSystem& system);

struct Flattened {
  FlatSystem system;
  // original indeterminate -> its indeterminate in `system`
  std::map<std::string, std::string> renamed;
};

// One fresh indeterminate per indeterminate of g and one per inner set node
// of each right-hand side. Solutions agree: s_x = s'_{renamed[x]}.
Flattened flatten(const GenSystem& system);

Solution solve_generalized(const GenSystem& system, const Limits& limits = {});

// Whether sol[x] = e_x with every stand-in replaced by its solution value.
bool satisfies(const GenSystem& system, const Solution& sol);

struct CanonicalSystem {
  GenSystem system;
  std::string root;
};

// One indeterminate per set node of a's minimal picture, atoms = support(a),
// each equation reading off the node's children. Solving returns a at root.
CanonicalSystem canonical_system(const HSet& a);

}  // namespace hyperset
