#pragma once

#include <cstddef>

namespace hyperset {

// Resource bounds shared by every operation that can grow a graph.
struct Limits {
  std::size_t node_budget = std::size_t{1} << 22;
  std::size_t power_set_bound = 20;
  std::size_t natural_bound = 64;
  // When false, a hash collision during canonical coloring raises
  // Errc::ColorCollision instead of falling back to exact refinement.
  bool collision_fallback = true;
  // Mask applied to every refinement hash. Only tests narrow it, to force
  // collisions.
  unsigned long long color_hash_mask = ~0ULL;
};

}  // namespace hyperset
