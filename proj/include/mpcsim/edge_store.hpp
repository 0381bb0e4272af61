#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/mpc.hpp"

namespace mpcsim::edge_store {

// Record-level building blocks shared by the peeling and MIS drivers. The
// residual graph lives in the run as one packed edge word per record
// (optionally followed by a prefix annotation). Tagged records are transient
// and exist only inside one pipeline.

// Tags carry the top bit; packed edges never do while vertex ids stay below
// 2^31.
inline constexpr Word kTagBit = Word{1} << 63;
inline constexpr Word kDirected = kTagBit | 1;  // [tag, src, dst, ...]
inline constexpr Word kClaim = kTagBit | 2;     // [tag, friend, claimant, blue, ...]
inline constexpr Word kHeavy = kTagBit | 3;     // [tag, v]
inline constexpr Word kRemove = kTagBit | 4;    // [tag, v, ...]
inline constexpr Word kSurvivor = kTagBit | 5;  // [tag, packed edge, ...]
inline constexpr Word kVertex = kTagBit | 6;    // [tag, v, ...]

inline bool is_edge(const Words& r) { return (r[0] & kTagBit) == 0; }

/// One prefix sum over the edge records. Returns the number of stored edges.
std::size_t count_edges(MpcRun& run);

/// One round: every edge record becomes two directed records [tag, u, v] and
/// [tag, v, u]. `extra(machine)` may append further records on each machine.
void expand(MpcRun& run,
            const std::function<std::vector<Words>(std::size_t)>& extra = {});

/// Drops every directed edge touching a vertex that has a remove record and
/// turns the surviving pairs back into packed edge records. Remove records
/// are consumed; `on_removed(v)` fires once per removed vertex.
/// Costs 3 rounds and 4 primitives.
void remove_marked(MpcRun& run, const std::function<void(VertexId)>& on_removed = {});

/// Driver-side view of the stored edges (no rounds charged).
std::vector<Edge> stored_edges(const MpcRun& run);
Graph residual_graph(const MpcRun& run, std::size_t n);

/// Cover vertices spread over machines in contiguous chunks.
std::vector<Words> remove_chunk(const std::vector<VertexId>& vertices,
                                std::size_t machine, std::size_t machines);

}  // namespace mpcsim::edge_store
