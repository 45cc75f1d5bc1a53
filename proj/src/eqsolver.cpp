#include "hyperset/eqsolver.hpp"

#include <algorithm>
#include <unordered_map>

#include "hyperset/error.hpp"

namespace hyperset {
namespace {

void check_flat(const FlatSystem& s) {
  for (const Atom& a : s.atoms)
    if (s.variables.contains(a.name()))
      throw Error(Errc::NameClash, "'" + a.name() + "' is both an indeterminate and an atom");
  for (const auto& v : s.variables)
    if (!s.equations.contains(v)) throw Error(Errc::MissingEquation, "no equation for '" + v + "'");
  for (const auto& [v, eq] : s.equations) {
    if (!s.variables.contains(v)) throw Error(Errc::UnboundName, "equation for unknown '" + v + "'");
    for (const auto& w : eq.variables)
      if (!s.variables.contains(w)) throw Error(Errc::UnboundName, "unbound name '" + w + "'");
    for (const Atom& a : eq.atoms)
      if (!s.atoms.contains(a)) throw Error(Errc::UnboundName, "unbound atom '" + a.name() + "'");
  }
}

}  // namespace

FlatSystem validate_flat(const std::vector<std::string>& variables, const std::vector<Atom>& atoms,
                         const std::map<std::string, std::vector<std::string>>& equations) {
  FlatSystem s;
  s.variables.insert(variables.begin(), variables.end());
  s.atoms.insert(atoms.begin(), atoms.end());
  std::unordered_map<std::string, Atom> atom_by_name;
  for (const Atom& a : s.atoms) {
    if (s.variables.contains(a.name()))
      throw Error(Errc::NameClash, "'" + a.name() + "' is both an indeterminate and an atom");
    atom_by_name.emplace(a.name(), a);
  }
  for (const auto& [v, rhs] : equations) {
    if (!s.variables.contains(v)) throw Error(Errc::UnboundName, "equation for unknown '" + v + "'");
    FlatEquation eq;
    for (const auto& sym : rhs) {
      if (s.variables.contains(sym))
        eq.variables.insert(sym);
      else if (auto it = atom_by_name.find(sym); it != atom_by_name.end())
        eq.atoms.insert(it->second);
      else
        throw Error(Errc::UnboundName, "'" + sym + "' in the equation for '" + v +
                                           "' is neither an indeterminate nor an atom");
    }
    s.equations.emplace(v, std::move(eq));
  }
  for (const auto& v : s.variables)
    if (!s.equations.contains(v)) throw Error(Errc::MissingEquation, "no equation for '" + v + "'");
  return s;
}

Solution solve(const FlatSystem& system, const Limits& limits) {
  check_flat(system);
  // node 0 is an auxiliary root over every indeterminate
  GraphAssembler as(limits);
  const NodeId top = as.add_set();
  std::map<std::string, NodeId> node_of;
  for (const auto& v : system.variables) {
    node_of[v] = as.add_set();
    as.add_edge(top, node_of[v]);
  }
  for (const auto& [v, eq] : system.equations) {
    for (const auto& w : eq.variables) as.add_edge(node_of[v], node_of[w]);
    for (const Atom& a : eq.atoms) as.add_edge(node_of[v], as.add_atom(a));
  }
  const ApGraph g = std::move(as).finish(top);

  const Partition p = coarsest_bisimulation(g);
  const ApGraph q = quotient(g);
  std::unordered_map<std::uint32_t, HSet> value_of_block;
  Solution out;
  for (const auto& [v, n] : node_of) {
    const std::uint32_t b = p.block_of[n];
    auto it = value_of_block.find(b);
    if (it == value_of_block.end())
      it = value_of_block.emplace(b, HSet::from_graph(rooted_at(q, b), limits)).first;
    out.emplace(v, it->second);
  }
  return out;
}

bool satisfies(const FlatSystem& system, const Solution& sol) {
  for (const auto& [v, eq] : system.equations) {
    std::vector<Element> members;
    for (const auto& w : eq.variables) members.push_back(sol.at(w));
    for (const Atom& a : eq.atoms) members.push_back(a);
    if (sol.at(v) != set_of(members)) return false;
  }
  return true;
}

HSet solution_set(const Solution& sol, const Limits& limits) {
  std::vector<Element> values;
  for (const auto& [v, s] : sol) values.push_back(s);
  return union_all(set_of(values, limits), limits);
}

bool is_well_founded_system(const FlatSystem& system) {
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::map<std::string, std::uint8_t> color;
  for (const auto& v : system.variables) color[v] = kWhite;
  using Frame = std::pair<const std::string*, std::set<std::string>::const_iterator>;
  for (const auto& start : system.variables) {
    if (color[start] != kWhite) continue;
    std::vector<Frame> stack{{&start, system.equations.at(start).variables.begin()}};
    color[start] = kGrey;
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      const auto& deps = system.equations.at(*v).variables;
      if (it == deps.end()) {
        color[*v] = kBlack;
        stack.pop_back();
        continue;
      }
      const std::string& w = *it++;
      if (color[w] == kGrey) return false;
      if (color[w] == kWhite) {
        color[w] = kGrey;
        stack.emplace_back(&w, system.equations.at(w).variables.begin());
      }
    }
  }
  return true;
}

GenSystem GenSystem::over(const std::vector<std::string>& variables, AtomSet atoms) {
  GenSystem g;
  g.variables.insert(variables.begin(), variables.end());
  g.atoms = std::move(atoms);
  std::vector<Atom> avoid(g.atoms.begin(), g.atoms.end());
  for (const auto& v : g.variables) g.stand_ins.emplace(v, fresh(v, avoid));
  return g;
}

Element GenSystem::var(const std::string& name) const {
  auto it = stand_ins.find(name);
  if (it == stand_ins.end()) throw Error(Errc::UnboundName, "unknown indeterminate '" + name + "'");
  return it->second;
}

void validate_generalized(const GenSystem& s) {
  AtomSet allowed = s.atoms;
  for (const Atom& a : s.atoms)
    if (s.variables.contains(a.name()))
      throw Error(Errc::NameClash, "'" + a.name() + "' is both an indeterminate and an atom");
  for (const auto& v : s.variables) {
    auto it = s.stand_ins.find(v);
    if (it == s.stand_ins.end()) throw Error(Errc::UnboundName, "indeterminate '" + v + "' has no stand-in");
    if (s.atoms.contains(it->second))
      throw Error(Errc::NameClash, "stand-in of '" + v + "' is one of the atoms");
    allowed.insert(it->second);
    if (!s.equations.contains(v)) throw Error(Errc::MissingEquation, "no equation for '" + v + "'");
  }
  for (const auto& [v, rhs] : s.equations) {
    if (!s.variables.contains(v)) throw Error(Errc::UnboundName, "equation for unknown '" + v + "'");
    for (const Atom& a : support(rhs))
      if (!allowed.contains(a))
        throw Error(Errc::UnboundName, "atom '" + a.name() + "' in the equation for '" + v +
                                           "' is neither an indeterminate nor a declared atom");
  }
}

bool is_generalized_flat(const GenSystem& s) {
  for (const auto& [v, rhs] : s.equations)
    for (const Element& e : elements(rhs))
      if (as_set(e)) return false;
  return true;
}

Flattened flatten(const GenSystem& g) {
  validate_generalized(g);
  std::vector<Atom> avoid(g.atoms.begin(), g.atoms.end());
  std::map<Atom, std::string> var_of_stand_in;
  Flattened out;
  out.system.atoms = g.atoms;
  for (const auto& v : g.variables) {
    const std::string y = fresh(v, avoid).name();
    out.renamed.emplace(v, y);
    var_of_stand_in.emplace(g.stand_ins.at(v), y);
    out.system.variables.insert(y);
  }
  for (const auto& [v, rhs] : g.equations) {
    const ApGraph& pic = rhs.graph();
    std::vector<std::string> name(pic.node_count());
    for (NodeId n = 0; n < pic.node_count(); ++n) {
      if (is_atom(pic.kind(n))) continue;
      name[n] = n == pic.root() ? out.renamed.at(v) : fresh(v, avoid).name();
      out.system.variables.insert(name[n]);
    }
    for (NodeId n = 0; n < pic.node_count(); ++n) {
      if (is_atom(pic.kind(n))) continue;
      FlatEquation eq;
      for (NodeId c : pic.children(n)) {
        if (auto a = atom_of(pic.kind(c))) {
          if (auto it = var_of_stand_in.find(*a); it != var_of_stand_in.end())
            eq.variables.insert(it->second);
          else
            eq.atoms.insert(*a);
        } else {
          eq.variables.insert(name[c]);
        }
      }
      out.system.equations.emplace(name[n], std::move(eq));
    }
  }
  return out;
}

Solution solve_generalized(const GenSystem& g, const Limits& limits) {
  const Flattened f = flatten(g);
  const Solution flat = solve(f.system, limits);
  Solution out;
  for (const auto& [x, y] : f.renamed) out.emplace(x, flat.at(y));
  return out;
}

bool satisfies(const GenSystem& g, const Solution& sol) {
  std::map<Atom, Element> by;
  for (const auto& [v, a] : g.stand_ins) by.emplace(a, sol.at(v));
  for (const auto& [v, rhs] : g.equations)
    if (sol.at(v) != substitute(rhs, by)) return false;
  return true;
}

CanonicalSystem canonical_system(const HSet& a) {
  const ApGraph& pic = a.graph();
  const AtomSet atoms = support(a);
  std::set<std::string> taken;
  for (const Atom& x : atoms) taken.insert(x.name());

  std::vector<std::string> name(pic.node_count());
  std::vector<std::string> names;
  std::size_t counter = 0;
  for (NodeId n = 0; n < pic.node_count(); ++n) {
    if (is_atom(pic.kind(n))) continue;
    std::string candidate = "v" + std::to_string(counter++);
    while (taken.contains(candidate)) candidate += "_";
    taken.insert(candidate);
    name[n] = candidate;
    names.push_back(candidate);
  }

  CanonicalSystem out{GenSystem::over(names, atoms), name[pic.root()]};
  for (NodeId n = 0; n < pic.node_count(); ++n) {
    if (is_atom(pic.kind(n))) continue;
    std::vector<Element> members;
    for (NodeId c : pic.children(n)) {
      if (auto x = atom_of(pic.kind(c)))
        members.push_back(*x);
      else
        members.push_back(out.system.var(name[c]));
    }
    out.system.equations.emplace(name[n], set_of(members));
  }
  return out;
}

}  // namespace hyperset
