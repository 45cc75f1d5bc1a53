#include <algorithm>
#include <numeric>
#include <tuple>

#include "hyperset/bisim.hpp"
#include "hyperset/error.hpp"

namespace hyperset {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix(h ^ mix(v)); }

// FNV-1a; names must hash the same in every process
std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t distinct_count(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  return static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
}

// Hash-based color refinement. Returns final colors; they are a function
// of the isomorphism class of the graph only.
std::vector<std::uint64_t> hashed_colors(const ApGraph& g, std::uint64_t mask) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> color(n);
  for (NodeId v = 0; v < n; ++v) {
    if (auto a = atom_of(g.kind(v)))
      color[v] = combine(1, hash_name(a->name())) & mask;
    else
      color[v] = mix(0) & mask;
  }
  std::size_t classes = distinct_count(color);
  std::vector<std::uint64_t> next(n), scratch;
  while (classes < n) {
    for (NodeId v = 0; v < n; ++v) {
      scratch.clear();
      for (NodeId c : g.children(v)) scratch.push_back(color[c]);
      std::sort(scratch.begin(), scratch.end());
      std::uint64_t h = combine(color[v], scratch.size());
      for (std::uint64_t c : scratch) h = combine(h, c);
      next[v] = h & mask;
    }
    const std::size_t refined = distinct_count(next);
    color.swap(next);
    if (refined <= classes) break;
    classes = refined;
  }
  return color;
}

// Exact refinement: colors are ranks of sorted signatures, so distinct
// signatures never share a color.
std::vector<std::uint64_t> exact_colors(const ApGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> color(n);
  {
    std::vector<std::tuple<int, std::string, NodeId>> keys;
    keys.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
      auto a = atom_of(g.kind(v));
      keys.emplace_back(a ? 1 : 0, a ? a->name() : std::string(), v);
    }
    std::sort(keys.begin(), keys.end());
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && (std::get<0>(keys[i]) != std::get<0>(keys[i - 1]) ||
                    std::get<1>(keys[i]) != std::get<1>(keys[i - 1])))
        ++rank;
      color[std::get<2>(keys[i])] = rank;
    }
  }
  std::size_t classes = distinct_count(color);
  using Signature = std::pair<std::uint64_t, std::vector<std::uint64_t>>;
  std::vector<Signature> sig(n);
  std::vector<NodeId> order(n);
  while (classes < n) {
    for (NodeId v = 0; v < n; ++v) {
      sig[v].first = color[v];
      sig[v].second.clear();
      for (NodeId c : g.children(v)) sig[v].second.push_back(color[c]);
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return sig[a] < sig[b]; });
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++rank;
      color[order[i]] = rank;
    }
    const std::size_t refined = rank + 1;
    if (refined <= classes) break;
    classes = refined;
  }
  return color;
}

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

}  // namespace

std::string CanonicalCode::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xf]);
  }
  return out;
}

CanonicalForm canonical_form(const ApGraph& input, const Limits& limits) {
  const ApGraph q = quotient(input);
  const std::size_t n = q.node_count();

  std::vector<std::uint64_t> color = hashed_colors(q, limits.color_hash_mask);
  if (distinct_count(color) < n) {
    if (!limits.collision_fallback)
      throw Error(Errc::ColorCollision, "color refinement left non-bisimilar nodes with equal colors");
    color = exact_colors(q);
    // a bisimulation-minimal graph is always fully separated
    if (distinct_count(color) < n)
      throw Error(Errc::ColorCollision, "exact refinement failed to separate nodes");
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return color[a] < color[b]; });
  std::vector<NodeId> rank(n);
  for (NodeId i = 0; i < n; ++i) rank[order[i]] = i;

  std::vector<NodeKind> kinds;
  kinds.reserve(n);
  std::vector<Edge> edges;
  edges.reserve(q.edge_count());
  for (NodeId i = 0; i < n; ++i) {
    const NodeId v = order[i];
    kinds.push_back(q.kind(v));
    for (NodeId c : q.children(v)) edges.emplace_back(i, rank[c]);
  }
  Limits unlimited;
  unlimited.node_budget = std::max(unlimited.node_budget, n);
  ApGraph canon = build_graph(std::move(kinds), edges, rank[q.root()], unlimited);

  std::string bytes;
  bytes.push_back(static_cast<char>(CanonicalCode::kVersion));
  put_varint(bytes, n);
  put_varint(bytes, canon.root());
  for (NodeId v = 0; v < n; ++v) {
    if (auto a = atom_of(canon.kind(v))) {
      bytes.push_back('\x01');
      put_varint(bytes, a->name().size());
      bytes += a->name();
    } else {
      auto kids = canon.children(v);
      bytes.push_back('\x00');
      put_varint(bytes, kids.size());
      for (NodeId c : kids) put_varint(bytes, c);
    }
  }
  return {std::move(canon), CanonicalCode(std::move(bytes))};
}

}  // namespace hyperset
