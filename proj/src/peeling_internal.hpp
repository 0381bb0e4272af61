#pragma once

#include <cstdint>

#include "mpcsim/peeling.hpp"

namespace mpcsim::detail {

/// Peels the edges held by `run` starting from bound d, appending to `out`.
/// Does not check the degree bound.
void peel_stored(MpcRun& run, double d, std::uint64_t seed, PeelingOutput& out);

/// Sorts matching and cover; copies the run statistics when given.
void finalize(PeelingOutput& out, const MpcRun* run);

bool is_blue(std::uint64_t seed, std::uint64_t phase, VertexId v);
VertexId friend_index(std::uint64_t seed, std::uint64_t phase, VertexId v,
                      std::size_t degree);

}  // namespace mpcsim::detail
