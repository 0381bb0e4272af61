#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/types.hpp"

namespace mpcsim {

struct CoreVertex {
  VertexId id = 0;
  VertexLabel label;

  auto operator<=>(const CoreVertex&) const = default;
};

/// The radius-r ball around `center`: every vertex at distance <= r with its
/// label, and every edge incident to one of those vertices with its label.
/// Far endpoints of boundary edges (distance r+1) appear only as bare ids.
struct Neighborhood {
  VertexId center = 0;
  std::uint32_t radius = 0;
  std::vector<CoreVertex> core;    // sorted by id
  std::vector<LabeledEdge> edges;  // canonical, sorted

  bool contains(VertexId v) const;
  const VertexLabel* label_of(VertexId v) const;

  /// Edge endpoints outside the core: exactly the vertices at distance r+1.
  std::vector<VertexId> frontier() const;

  /// Canonical encoding: [center, radius, #core, #edges], then per core vertex
  /// [id, label length, label words...], then per edge [u, v, phase, rho_u,
  /// rho_v]. Equal neighborhoods have equal encodings.
  Words serialize() const;
  static Neighborhood deserialize(std::span<const Word> words);

  /// Size of serialize() without building it.
  std::size_t words() const;

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

inline constexpr std::size_t kNeighborhoodHeaderWords = 4;
inline constexpr std::size_t kEdgeRecordWords = 2 + kEdgeLabelWords;

/// N_r(v) computed directly on the host graph. Throws InputError if v >= n.
Neighborhood neighborhood(const LabeledMultigraph& g, VertexId v,
                          std::uint32_t radius);

/// The sub-ball of radius r' <= nb.radius around the same center.
Neighborhood restrict_radius(const Neighborhood& nb, std::uint32_t radius);

/// Grows N_r(v) to N_{r+r'+1}(v) from the radius-r' balls of all vertices at
/// distance exactly r+1. Throws IncompletenessError when a frontier vertex has
/// no extension and InputError on radius mismatch or a foreign extension.
Neighborhood combine_neighborhoods(const Neighborhood& base,
                                   std::span<const Neighborhood> extensions,
                                   std::uint32_t extension_radius);

/// Graph distances from nb.center restricted to the ball; entries for the
/// returned ids align with `order`. Vertices of the frontier get radius+1.
struct BallDistances {
  std::vector<VertexId> order;          // core ids then frontier ids, by distance
  std::vector<std::uint32_t> distance;  // aligned with order
};
BallDistances ball_distances(const Neighborhood& nb);

}  // namespace mpcsim
