#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mpcsim {

/// One word of machine space.
using Word = std::uint64_t;
using Words = std::vector<Word>;

using VertexId = std::uint32_t;

inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);
inline constexpr std::size_t kMaxVertices = std::size_t{1} << 31;

}  // namespace mpcsim
