#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mpcsim/graph.hpp"

namespace mpcsim {

struct OracleBudget {
  std::size_t max_n_exact_matching = 22;
  std::size_t max_n_exact_cover = 40;
};

struct MatchingWitness {
  std::size_t size = 0;
  std::vector<Edge> edges;
};

/// Maximum matching by exhaustive search with memoization over the set of
/// remaining vertices. Throws BudgetExceeded beyond the budget.
MatchingWitness max_matching_exact(const Graph& g, const OracleBudget& budget = {});

struct CoverWitness {
  std::size_t size = 0;
  std::vector<VertexId> vertices;
};

/// Minimum vertex cover by branch and bound: an uncovered edge at a vertex u
/// of largest remaining degree either has u in the cover or, if not, all of
/// u's neighbors. Greedy maximal matchings give the lower bound.
CoverWitness min_vertex_cover_exact(const Graph& g, const OracleBudget& budget = {});

/// Pairwise disjoint endpoints, every pair an edge of g.
bool check_matching(const Graph& g, std::span<const Edge> matching);
/// Every edge of g has an endpoint in the set.
bool check_cover(const Graph& g, std::span<const VertexId> cover);
/// Independent and maximal.
bool check_mis(const Graph& g, std::span<const VertexId> set);

/// Smallest k such that every subgraph has a vertex of degree <= k.
std::size_t degeneracy(const Graph& g);

}  // namespace mpcsim
