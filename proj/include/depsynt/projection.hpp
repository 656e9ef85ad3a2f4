#pragma once

#include <span>
#include <vector>

#include "depsynt/nba.hpp"

namespace depsynt {

// Existentially quantifies `xs` out of every edge label. States and edges
// stay one-to-one with `a`; the result's outputs are those of `a` minus xs.
Nba project(const Nba& a, std::span<const VarId> xs);

struct ProjectionStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  // Sums of internal node counts over distinct edge labels.
  std::size_t bdd_before = 0;
  std::size_t bdd_after = 0;
  // Per edge, internal nodes after minus before.
  std::vector<long> edge_deltas;
};

ProjectionStats projection_stats(const Nba& before, const Nba& after);

}  // namespace depsynt
