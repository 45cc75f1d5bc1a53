#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperset/graph.hpp"
#include "hyperset/limits.hpp"

namespace hyperset {

// Block assignment for every node of one graph. Blocks are numbered in
// order of their first node, so equal partitions compare equal.
struct Partition {
  std::vector<std::uint32_t> block_of;
  std::size_t block_count = 0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Maximal bisimulation, computed by Paige-Tarjan relational coarsest
// partition refinement in O(m log n). Initial partition: leaves carrying
// the same atom form one block per atom, set nodes form one block.
Partition coarsest_bisimulation(const ApGraph& g);

// Whether the two roots denote the same hyperset.
bool bisimilar(const ApGraph& a, const ApGraph& b);

// The bisimulation-minimal graph of the same value. Blocks become nodes in
// Partition order.
ApGraph quotient(const ApGraph& g);

class CanonicalCode {
 public:
  static constexpr std::uint8_t kVersion = 1;

  CanonicalCode() = default;
  explicit CanonicalCode(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const noexcept { return bytes_; }
  std::string hex() const;

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend std::strong_ordering operator<=>(const CanonicalCode& a, const CanonicalCode& b) {
    return a.bytes_.compare(b.bytes_) <=> 0;
  }

 private:
  std::string bytes_;
};

// Quotient graph renumbered into presentation independent order plus its
// serialization. Node order is by final color of iterated color refinement
// (color := hash(previous color, sorted child colors)); if two nodes share
// a final color the exact rank-based refinement is used instead, unless
// limits.collision_fallback is off, in which case Errc::ColorCollision is
// thrown.
struct CanonicalForm {
  ApGraph graph;
  CanonicalCode code;
};

CanonicalForm canonical_form(const ApGraph& g, const Limits& limits = {});

inline CanonicalCode canonical_code(const ApGraph& g, const Limits& limits = {}) {
  return canonical_form(g, limits).code;
}

}  // namespace hyperset
