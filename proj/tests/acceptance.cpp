// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hyperset/bisim.hpp"
#include "hyperset/cli.hpp"
#include "hyperset/dot.hpp"
#include "hyperset/dsl.hpp"
#include "hyperset/eqsolver.hpp"
#include "hyperset/error.hpp"
#include "support/oracles.hpp"

using namespace hyperset;

namespace {

// Pinned tolerances.
constexpr double kOmegaSeconds = 1.0;
constexpr double kLargeQuotientSeconds = 10.0;
constexpr std::size_t kLargeNodes = 100000;
constexpr std::size_t kLargeEdges = 500000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    ++total_;
    if (!cond && failures_++ == 0) first_ = what;
  }
  Outcome outcome(std::string summary) const {
    if (failures_ == 0) return {true, summary + ", " + std::to_string(total_) + " checks"};
    return {false, std::to_string(failures_) + "/" + std::to_string(total_) + " checks failed; first: " + first_};
  }

 private:
  std::size_t total_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HSet s(std::initializer_list<Element> e) { return set_of(e); }

// Members of `a` are exactly `expected`.
bool members_are(const HSet& a, std::initializer_list<Element> expected) {
  std::size_t distinct = 0;
  for (const Element& e : expected) {
    if (!contains(a, e)) return false;
    ++distinct;
  }
  return a.size() == set_of(expected).size() && distinct >= a.size();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// decorate(g) is the extensional value of every node of a well-founded g:
// same equality pattern as the oracle, and each node's value has exactly
// its children's values as members.
bool matches_mostowski(const ApGraph& g) {
  const auto deco = decorate(g);
  const auto ids = oracle::mostowski_ids(g);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (const auto a = atom_of(g.kind(u))) {
      if (!(deco[u] == Element{*a})) return false;
      continue;
    }
    const HSet* su = as_set(deco[u]);
    if (!su) return false;
    std::vector<Element> kids;
    for (NodeId c : g.children(u)) kids.push_back(deco[c]);
    if (!(*su == set_of(kids))) return false;
    for (NodeId v = u + 1; v < g.node_count(); ++v)
      if ((deco[u] == deco[v]) != (ids[u] == ids[v])) return false;
  }
  return true;
}

Outcome omega_suite() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const HSet sx = solve_generalized(dsl::to_gen_system(dsl::parse_system("x = {x};"))).at("x");
  c.expect(sx == s({sx}), "s_x = {s_x}");
  c.expect(sx == omega(), "s_x is omega");
  HSet wrapped = sx;
  for (int n = 1; n <= 10; ++n) {
    wrapped = s({wrapped});
    c.expect(wrapped == sx, std::to_string(n) + "-fold singleton");
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < kOmegaSeconds, "runtime under 1 s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f s", elapsed);
  return c.outcome(buf);
}

Outcome worked_system() {
  Check c;
  const Atom p = intern_atom("p"), q = intern_atom("q");
  FlatSystem sys = validate_flat({"x", "y", "z"}, {p, q},
                                 {{"x", {"x", "y"}}, {"y", {"p", "q", "y", "z"}}, {"z", {"p", "x", "y"}}});
  Solution sol = solve(sys);
  const HSet &sx = sol.at("x"), &sy = sol.at("y"), &sz = sol.at("z");
  c.expect(members_are(sx, {sx, sy}), "s_x = {s_x, s_y}");
  c.expect(members_are(sy, {p, q, sy, sz}), "s_y = {p, q, s_y, s_z}");
  c.expect(members_are(sz, {p, sx, sy}), "s_z = {p, s_x, s_y}");
  c.expect(!contains(sx, p) && !contains(sz, q) && !contains(sx, sz), "non-members");
  c.expect(satisfies(sys, sol), "satisfies");
  return c.outcome("membership verified for x, y, z");
}

Outcome example_four_one() {
  Check c;
  const DotGraph dg = parse_dot(slurp(HYPERSET_TEST_DIR "/data/ex41.dot"));
  const auto deco = decorate(dg.graph);
  for (NodeId v = 0; v < dg.graph.node_count(); ++v) {
    const std::size_t expected = static_cast<std::size_t>(dg.names[v][1] - '0');
    c.expect(as_set(deco[v]) && *as_set(deco[v]) == natural(expected), "S(" + dg.names[v] + ")");
  }
  c.expect(*as_set(deco[dg.graph.root()]) == natural(3), "S(3) = 3");
  return c.outcome("decorations 0, 1, 2, 3");
}

Outcome closure_examples() {
  Check c;
  const Atom x = intern_atom("x"), y = intern_atom("y");
  const HSet a = s({x, s({y})});
  c.expect(tc(a) == s({x, s({y}), y}), "tc({x,{y}})");
  c.expect(support(a) == AtomSet{x, y}, "support({x,{y}})");
  c.expect(tc(empty()) == empty(), "tc(empty)");
  c.expect(tc(s({x, y})) == s({x, y}), "tc of atoms");
  std::mt19937_64 rng(401);
  int powers = 0, pairs = 0;
  while (powers < 20) {
    HSet X = oracle::random_hset(rng, 5, true, true);
    if (X.size() > 8) continue;
    c.expect(tc(power_set(X)) == set_union(power_set(X), tc(X)), "tc(P(X))");
    ++powers;
  }
  for (; pairs < 20; ++pairs) {
    HSet u = oracle::random_hset(rng, 5, true, true);
    Element v = rng() % 4 == 0 ? Element{y} : Element{oracle::random_hset(rng, 5, true, true)};
    c.expect(tc(kpair(u, v)) == set_union(kpair(u, v), tc(s({u, v}))), "tc(<a,b>)");
  }
  return c.outcome("20 power sets, 20 pairs");
}

Outcome mostowski() {
  Check c;
  std::size_t graphs = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<Edge> slots;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < slots.size(); ++b)
        if (mask >> b & 1) edges.push_back(slots[b]);
      ApGraph g = build_graph(std::vector<NodeKind>(n, SetNode{}), edges, 0);
      c.expect(matches_mostowski(g), "exhaustive DAG");
      ++graphs;
    }
  }
  std::mt19937_64 rng(501);
  for (int i = 0; i < 200; ++i) {
    const std::size_t set_nodes = 1 + rng() % 190;
    oracle::GraphShape shape{set_nodes, rng() % 10, rng() % (4 * set_nodes), true};
    c.expect(matches_mostowski(oracle::random_graph(rng, shape)), "random DAG");
    ++graphs;
  }
  // well-founded systems have well-founded solutions
  const Atom p = intern_atom("p");
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::string> vars;
    for (std::size_t k = 0; k < n; ++k) vars.push_back("w" + std::to_string(k));
    std::map<std::string, std::vector<std::string>> eqs;
    for (std::size_t k = 0; k < n; ++k) {
      auto& rhs = eqs[vars[k]];
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 3 == 0) rhs.push_back(vars[j]);
      if (rng() % 2) rhs.push_back("p");
    }
    FlatSystem sys = validate_flat(vars, {p}, eqs);
    if (!is_well_founded_system(sys)) continue;
    for (const auto& [name, v] : solve(sys)) c.expect(is_well_founded_set(v), "well-founded solution");
  }
  return c.outcome(std::to_string(graphs) + " graphs");
}

Outcome round_trip() {
  Check c;
  std::mt19937_64 rng(601);
  int cyclic = 0, with_atoms = 0;
  for (int i = 0; i < 500; ++i) {
    HSet a = oracle::random_hset(rng, 10, i % 2 == 0, i % 4 < 2);
    cyclic += !is_well_founded_set(a);
    with_atoms += !is_pure(a);
    CanonicalSystem cs = canonical_system(a);
    Solution sol = solve_generalized(cs.system);
    c.expect(sol.at(cs.root) == a, "round-trip");
    const HSet ss = solution_set(sol);
    for (const Element& e : elements(ss)) {
      if (const HSet* m = as_set(e)) {
        c.expect(is_subset(*m, ss), "solution-set transitive");
        c.expect(in_v_afa(*m, cs.system.atoms), "member support within A");
      } else {
        c.expect(cs.system.atoms.count(*as_atom(e)) == 1, "atom member in A");
      }
    }
  }
  return c.outcome("500 values, " + std::to_string(cyclic) + " cyclic, " + std::to_string(with_atoms) + " with atoms");
}

Outcome properties() {
  Check c;
  std::mt19937_64 rng(701);
  const HSet atoms = s({intern_atom("t0"), intern_atom("t1")});
  std::vector<HSet> pool;
  for (int i = 0; i < 1000; ++i) pool.push_back(oracle::random_hset(rng, 6, true, true));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const HSet& a = pool[i];
    if (is_well_founded_set(a)) c.expect(!contains(a, a), "a not in a");
    c.expect(!(a == power_set(a)), "X != P(X)");
    if (!(a == empty())) c.expect(!(a == cartesian_product(atoms, a)), "X != A x X");
    const HSet& b = pool[(i * 7 + 1) % pool.size()];
    const HSet& cc = rng() % 2 ? a : pool[(i * 13 + 5) % pool.size()];
    const HSet& d = rng() % 2 ? b : pool[(i * 17 + 3) % pool.size()];
    c.expect((kpair(a, b) == kpair(cc, d)) == (a == cc && b == d), "pair law");
  }
  return c.outcome("1000 values");
}

Outcome bisimulation() {
  Check c;
  std::size_t graphs = 0;
  auto agree = [&](const ApGraph& g) {
    c.expect(coarsest_bisimulation(g).block_of == oracle::naive_bisimulation(g), "partition == naive");
    ++graphs;
  };
  // every digraph on up to four set nodes
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint32_t mask = 0; mask < (1u << (n * n)); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < n * n; ++b)
        if (mask >> b & 1) edges.emplace_back(b / n, b % n);
      agree(build_graph(std::vector<NodeKind>(n, SetNode{}), edges, 0));
    }
  // three set nodes with two atom leaves
  const Atom p = intern_atom("p"), q = intern_atom("q");
  for (const auto& second : {p, q})
    for (std::uint32_t mask = 0; mask < (1u << 15); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < 15; ++b)
        if (mask >> b & 1) edges.emplace_back(b / 5, b % 5);
      agree(build_graph({SetNode{}, SetNode{}, SetNode{}, AtomLeaf{p}, AtomLeaf{second}}, edges, 0));
    }
  // structured families up to twelve nodes
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<Edge> cycle, path, complete, chords, tree;
    for (NodeId i = 0; i < n; ++i) {
      cycle.emplace_back(i, (i + 1) % n);
      if (i + 1 < n) path.emplace_back(i, i + 1);
      for (NodeId j = 0; j < n; ++j) complete.emplace_back(i, j);
      chords.emplace_back(i, (i + 1) % n);
      chords.emplace_back(i, (i * 3 + 2) % n);
      if (2 * i + 1 < n) tree.emplace_back(i, 2 * i + 1);
      if (2 * i + 2 < n) tree.emplace_back(i, 2 * i + 2);
    }
    for (const auto* e : {&cycle, &path, &complete, &chords, &tree})
      agree(build_graph(std::vector<NodeKind>(n, SetNode{}), *e, 0));
  }
  std::mt19937_64 rng(801);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t set_nodes = 1 + rng() % 10;
    oracle::GraphShape shape{set_nodes, rng() % 3, rng() % (3 * set_nodes + 1), false};
    agree(oracle::random_graph(rng, shape));
  }
  const ApGraph loop = build_graph({SetNode{}}, std::vector<Edge>{{0, 0}}, 0);
  const ApGraph two = build_graph({SetNode{}, SetNode{}}, std::vector<Edge>{{0, 1}, {1, 0}}, 0);
  c.expect(canonical_code(loop).bytes() == canonical_code(two).bytes(), "omega codes identical");
  return c.outcome(std::to_string(graphs) + " graphs");
}

long peak_rss_kib() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  return -1;
}

Outcome performance() {
  Check c;
  std::mt19937_64 rng(901);
  const std::size_t atoms = 64;
  const auto pool = oracle::atom_pool(8);
  std::vector<NodeKind> kinds(kLargeNodes - atoms, SetNode{});
  for (std::size_t i = 0; i < atoms; ++i) kinds.emplace_back(AtomLeaf{pool[i % pool.size()]});
  const std::size_t sets = kLargeNodes - atoms;
  std::vector<Edge> edges;
  edges.reserve(kLargeEdges);
  for (NodeId v = 1; v < sets; ++v) edges.emplace_back(static_cast<NodeId>(rng() % v), v);
  for (NodeId v = static_cast<NodeId>(sets); v < kLargeNodes; ++v)
    edges.emplace_back(static_cast<NodeId>(rng() % sets), v);
  while (edges.size() < kLargeEdges)
    edges.emplace_back(static_cast<NodeId>(rng() % sets), static_cast<NodeId>(rng() % kLargeNodes));
  const Limits limits;
  const ApGraph g = build_graph(kinds, edges, 0, limits);
  c.expect(g.node_count() == kLargeNodes, "input accessible");

  const auto t0 = std::chrono::steady_clock::now();
  const ApGraph q = quotient(g);
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < kLargeQuotientSeconds, "quotient under 10 s");
  c.expect(q.node_count() <= limits.node_budget, "result within node budget");
  c.expect(bisimilar(q, g), "quotient bisimilar to input");

  // every node has a successor and there are no leaves: collapses to omega
  std::vector<Edge> looped;
  looped.reserve(kLargeEdges);
  for (NodeId v = 1; v < kLargeNodes; ++v) looped.emplace_back(static_cast<NodeId>(rng() % v), v);
  while (looped.size() < kLargeEdges)
    looped.emplace_back(static_cast<NodeId>(rng() % kLargeNodes), static_cast<NodeId>(rng() % kLargeNodes));
  for (NodeId v = 0; v < kLargeNodes; ++v) looped.emplace_back(v, static_cast<NodeId>(rng() % kLargeNodes));
  const ApGraph dense = build_graph(std::vector<NodeKind>(kLargeNodes, SetNode{}), looped, 0, limits);
  const auto t1 = std::chrono::steady_clock::now();
  const ApGraph collapsed = quotient(dense);
  const double collapse_time = seconds_since(t1);
  c.expect(collapse_time < kLargeQuotientSeconds, "collapse under 10 s");
  c.expect(collapsed == omega().graph(), "leafless graph collapses to omega");

  Limits tight;
  tight.node_budget = kLargeNodes / 2;
  bool limited = false;
  try {
    build_graph(kinds, edges, 0, tight);
  } catch (const Error& e) {
    limited = e.code() == Errc::SizeLimit;
  }
  c.expect(limited, "over-budget input rejected with SizeLimit");

  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu nodes, %zu edges -> %zu nodes in %.3f s; leafless -> 1 node in %.3f s; peak RSS %ld MiB",
                g.node_count(), g.edge_count(), q.node_count(), elapsed, collapse_time, peak_rss_kib() / 1024);
  return c.outcome(buf);
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome formats() {
  Check c;
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 500; ++i) {
    HSet a = oracle::random_hset(rng, 10, true, true);
    c.expect(dsl::evaluate(dsl::print_canonical(a)) == a, "DSL round-trip");
  }
  for (int i = 0; i < 200; ++i) {
    oracle::GraphShape shape{1 + rng() % 20, rng() % 4, rng() % 40, false};
    ApGraph g = oracle::random_graph(rng, shape);
    c.expect(from_dot(to_dot(g)) == g, "DOT round-trip");
  }
  c.expect(cli({"eq", "{{},{{}}}", "2"}) == cli::kOk, "eq {{},{{}}} 2 exits 0");
  c.expect(cli({"eq", "{}", "{{}}"}) == cli::kNotEqual, "unequal exits 1");
  c.expect(cli({"eq", "{", "2"}) == cli::kUserError, "parse error exits 2");
  c.expect(cli({"solve", HYPERSET_TEST_DIR "/data/missing.hs"}) == cli::kUserError, "missing file exits 2");
  c.expect(cli({"nonsense"}) == cli::kUserError, "unknown verb exits 2");
  c.expect(cli({"--power-set-bound", "2", "canon", "3"}) == cli::kOk, "ok exits 0");
  c.expect(cli({"--node-budget", "4", "canon", "9"}) == cli::kLimitError, "node budget exits 3");
  return c.outcome("500 DSL, 200 DOT, 7 exit codes");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"omega suite", omega_suite},
      {"worked system fixed point", worked_system},
      {"four-node decoration", example_four_one},
      {"closure and support examples", closure_examples},
      {"Mostowski oracle", mostowski},
      {"canonical system round-trip", round_trip},
      {"foundation property suites", properties},
      {"bisimulation correctness", bisimulation},
      {"large quotient performance", performance},
      {"CLI and format contracts", formats},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
