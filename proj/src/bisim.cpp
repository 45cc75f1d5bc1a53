#include "hyperset/bisim.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "hyperset/error.hpp"

namespace hyperset {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Refinable partition over node ids. Marked elements of a block are kept
// at its front; split() carves them off as a new block.
class RefinablePartition {
 public:
  explicit RefinablePartition(std::size_t n) : elems_(n), pos_(n), block_(n) {}

  std::uint32_t add_block(std::span<const NodeId> members) {
    const auto b = static_cast<std::uint32_t>(first_.size());
    const auto start = static_cast<std::uint32_t>(filled_);
    for (NodeId v : members) {
      elems_[filled_] = v;
      pos_[v] = static_cast<std::uint32_t>(filled_);
      block_[v] = b;
      ++filled_;
    }
    first_.push_back(start);
    end_.push_back(static_cast<std::uint32_t>(filled_));
    mark_end_.push_back(start);
    return b;
  }

  std::size_t block_count() const noexcept { return first_.size(); }
  std::uint32_t block_of(NodeId v) const noexcept { return block_[v]; }
  std::uint32_t size(std::uint32_t b) const noexcept { return end_[b] - first_[b]; }
  std::span<const NodeId> members(std::uint32_t b) const {
    return {elems_.data() + first_[b], elems_.data() + end_[b]};
  }

  void mark(NodeId v) {
    const std::uint32_t b = block_[v];
    const std::uint32_t p = pos_[v];
    if (p < mark_end_[b]) return;
    if (mark_end_[b] == first_[b]) touched_.push_back(b);
    const std::uint32_t q = mark_end_[b]++;
    const NodeId w = elems_[q];
    elems_[q] = v;
    pos_[v] = q;
    elems_[p] = w;
    pos_[w] = p;
  }

  // Splits every touched block; `on_new(old, fresh)` runs for each new block.
  template <typename F>
  void split(F&& on_new) {
    for (std::uint32_t b : touched_) {
      if (mark_end_[b] == end_[b]) {
        mark_end_[b] = first_[b];
        continue;
      }
      const auto nb = static_cast<std::uint32_t>(first_.size());
      first_.push_back(first_[b]);
      end_.push_back(mark_end_[b]);
      mark_end_.push_back(first_[b]);
      first_[b] = mark_end_[b];
      for (std::uint32_t i = first_[nb]; i < end_[nb]; ++i) block_[elems_[i]] = nb;
      on_new(b, nb);
    }
    touched_.clear();
  }

 private:
  std::vector<NodeId> elems_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> block_;
  std::vector<std::uint32_t> first_, end_, mark_end_;
  std::vector<std::uint32_t> touched_;
  std::size_t filled_ = 0;
};

Partition normalize(const RefinablePartition& q, std::size_t n) {
  Partition p;
  p.block_of.assign(n, 0);
  std::vector<std::uint32_t> renumber(q.block_count(), kNone);
  std::uint32_t next = 0;
  for (NodeId v = 0; v < n; ++v) {
    std::uint32_t& r = renumber[q.block_of(v)];
    if (r == kNone) r = next++;
    p.block_of[v] = r;
  }
  p.block_count = next;
  return p;
}

}  // namespace

Partition coarsest_bisimulation(const ApGraph& g) {
  const std::size_t n = g.node_count();
  const std::size_t m = g.edge_count();

  // Edges are numbered in CSR order; reverse index lists incoming edge ids.
  std::vector<NodeId> source(m);
  std::vector<std::uint32_t> rev_offset(n + 1, 0);
  {
    std::size_t e = 0;
    for (NodeId v = 0; v < n; ++v)
      for (NodeId c : g.children(v)) {
        source[e++] = v;
        ++rev_offset[c + 1];
      }
    for (std::size_t i = 0; i < n; ++i) rev_offset[i + 1] += rev_offset[i];
  }
  std::vector<std::uint32_t> rev_edges(m);
  {
    std::vector<std::uint32_t> fill(rev_offset.begin(), rev_offset.end() - 1);
    std::uint32_t e = 0;
    for (NodeId v = 0; v < n; ++v)
      for (NodeId c : g.children(v)) rev_edges[fill[c]++] = e++;
  }

  // Initial partition, already stable with respect to the whole node set:
  // set nodes with children, childless set nodes, one block per atom.
  RefinablePartition q(n);
  {
    std::vector<NodeId> inner, empty;
    std::map<Atom, std::vector<NodeId>> leaves;
    for (NodeId v = 0; v < n; ++v) {
      if (auto a = atom_of(g.kind(v)))
        leaves[*a].push_back(v);
      else if (g.children(v).empty())
        empty.push_back(v);
      else
        inner.push_back(v);
    }
    if (!inner.empty()) q.add_block(inner);
    if (!empty.empty()) q.add_block(empty);
    for (const auto& [atom, ids] : leaves) q.add_block(ids);
  }

  // Compound partition X: super-blocks as lists of Q-blocks.
  std::vector<std::vector<std::uint32_t>> super_members(1);
  std::vector<std::uint32_t> super_of, index_in_super;
  for (std::uint32_t b = 0; b < q.block_count(); ++b) {
    super_of.push_back(0);
    index_in_super.push_back(static_cast<std::uint32_t>(super_members[0].size()));
    super_members[0].push_back(b);
  }
  std::vector<std::uint32_t> compound;
  std::vector<bool> in_compound{false};
  if (super_members[0].size() > 1) {
    compound.push_back(0);
    in_compound[0] = true;
  }

  // count(x, S) records; each edge x -> y points at count(x, S) where S is
  // the super-block holding y.
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> free_records;
  std::vector<std::uint32_t> edge_record(m);
  auto new_record = [&]() -> std::uint32_t {
    if (!free_records.empty()) {
      const std::uint32_t r = free_records.back();
      free_records.pop_back();
      count[r] = 0;
      return r;
    }
    count.push_back(0);
    return static_cast<std::uint32_t>(count.size() - 1);
  };
  {
    std::uint32_t e = 0;
    for (NodeId v = 0; v < n; ++v) {
      auto kids = g.children(v);
      if (kids.empty()) continue;
      const std::uint32_t r = new_record();
      count[r] = static_cast<std::uint32_t>(kids.size());
      for (std::size_t i = 0; i < kids.size(); ++i) edge_record[e++] = r;
    }
  }

  auto on_new_block = [&](std::uint32_t old_block, std::uint32_t fresh) {
    const std::uint32_t s = super_of[old_block];
    super_of.push_back(s);
    index_in_super.push_back(static_cast<std::uint32_t>(super_members[s].size()));
    super_members[s].push_back(fresh);
    if (super_members[s].size() > 1 && !in_compound[s]) {
      in_compound[s] = true;
      compound.push_back(s);
    }
  };

  std::vector<std::uint32_t> record_of(n, kNone);  // count(x, B) during one step
  std::vector<NodeId> splitter, preimage;

  while (!compound.empty()) {
    const std::uint32_t s = compound.back();
    auto& members = super_members[s];
    std::uint32_t b = members[0];
    if (q.size(members[1]) < q.size(b)) b = members[1];

    // move b out of s into its own super-block
    {
      const std::uint32_t i = index_in_super[b];
      const std::uint32_t last = members.back();
      members[i] = last;
      index_in_super[last] = i;
      members.pop_back();
      if (members.size() < 2) {
        in_compound[s] = false;
        compound.pop_back();
      }
      const auto fresh_super = static_cast<std::uint32_t>(super_members.size());
      super_members.push_back({b});
      in_compound.push_back(false);
      super_of[b] = fresh_super;
      index_in_super[b] = 0;
    }

    auto block = q.members(b);
    splitter.assign(block.begin(), block.end());

    for (NodeId y : splitter)
      for (std::uint32_t i = rev_offset[y]; i < rev_offset[y + 1]; ++i) {
        const NodeId x = source[rev_edges[i]];
        if (record_of[x] == kNone) {
          record_of[x] = new_record();
          preimage.push_back(x);
        }
        ++count[record_of[x]];
      }

    // split by E^-1(B)
    for (NodeId x : preimage) q.mark(x);
    q.split(on_new_block);

    // split by E^-1(B) \ E^-1(S \ B): all of x's edges into S lead into B
    for (NodeId y : splitter)
      for (std::uint32_t i = rev_offset[y]; i < rev_offset[y + 1]; ++i) {
        const std::uint32_t e = rev_edges[i];
        const NodeId x = source[e];
        if (count[record_of[x]] == count[edge_record[e]]) q.mark(x);
      }
    q.split(on_new_block);

    for (NodeId y : splitter)
      for (std::uint32_t i = rev_offset[y]; i < rev_offset[y + 1]; ++i) {
        const std::uint32_t e = rev_edges[i];
        const std::uint32_t old_record = edge_record[e];
        if (--count[old_record] == 0) free_records.push_back(old_record);
        edge_record[e] = record_of[source[e]];
      }

    for (NodeId x : preimage) record_of[x] = kNone;
    preimage.clear();
  }

  return normalize(q, n);
}

bool bisimilar(const ApGraph& a, const ApGraph& b) {
  Limits unlimited;
  unlimited.node_budget = std::max(unlimited.node_budget, a.node_count() + b.node_count() + 1);
  GraphAssembler assembler(unlimited);
  const NodeId top = assembler.add_set();
  const NodeId ra = assembler.import(a);
  const NodeId rb = assembler.import(b);
  assembler.add_edge(top, ra);
  assembler.add_edge(top, rb);
  // finish() preserves relative order, so ids survive when nothing is dropped
  const ApGraph joint = std::move(assembler).finish(top);
  const Partition p = coarsest_bisimulation(joint);
  return p.block_of[ra] == p.block_of[rb];
}

ApGraph quotient(const ApGraph& g) {
  const Partition p = coarsest_bisimulation(g);
  std::vector<NodeKind> kinds(p.block_count);
  std::vector<bool> done(p.block_count, false);
  std::vector<Edge> edges;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint32_t b = p.block_of[v];
    if (done[b]) continue;
    done[b] = true;
    kinds[b] = g.kind(v);
    for (NodeId c : g.children(v)) edges.emplace_back(b, p.block_of[c]);
  }
  Limits unlimited;
  unlimited.node_budget = std::max(unlimited.node_budget, g.node_count());
  return build_graph(std::move(kinds), edges, p.block_of[g.root()], unlimited);
}

}  // namespace hyperset
