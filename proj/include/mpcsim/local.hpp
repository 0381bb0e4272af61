#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/neighborhood.hpp"
#include "mpcsim/types.hpp"

namespace mpcsim {

/// What a vertex knows about itself at time zero: its id, its label and its
/// incident edges (ordered by neighbor, then label).
struct VertexContext {
  VertexId id = 0;
  const VertexLabel& label;
  std::span<const IncidentEdge> edges;
};

/// A deterministic synchronous LOCAL-model algorithm. Round k (1-based)
/// consists of send() on every vertex followed by receive() on every vertex;
/// messages travel along incident edges. All randomness must come from the
/// labels. State is measured in words after every step and may not exceed
/// state_bound().
class LocalAlgorithm {
 public:
  virtual ~LocalAlgorithm() = default;

  /// Number of rounds t.
  virtual std::uint32_t rounds() const = 0;
  /// s_A: largest per-vertex state, in words.
  virtual std::size_t state_bound() const = 0;
  /// l_out: largest per-vertex output, in words.
  virtual std::size_t output_bound() const = 0;

  virtual Words initial_state(const VertexContext& v) const = 0;
  /// One message per incident edge (an empty message is allowed).
  virtual std::vector<Words> send(const VertexContext& v, const Words& state,
                                  std::uint32_t round) const = 0;
  /// inbox[i] arrived over v.edges[i].
  virtual Words receive(const VertexContext& v, Words state,
                        std::span<const Words> inbox,
                        std::uint32_t round) const = 0;
  virtual Words output(const VertexContext& v, const Words& state) const = 0;
};

/// One output per vertex.
using LocalOutput = std::vector<Words>;

/// Runs `a` for exactly a.rounds() rounds on the whole graph with real
/// neighbor message exchange. Throws ContractViolation when a state or output
/// exceeds its declared bound.
LocalOutput simulate_local_direct(const LabeledMultigraph& g,
                                  const LocalAlgorithm& a);

/// Output of `a` at nb.center computed from the ball alone. Throws
/// InputError if nb.radius < a.rounds().
Words simulate_on_neighborhood(const Neighborhood& nb, const LocalAlgorithm& a);

/// Words of per-vertex state measured while simulating on a ball: the
/// largest state seen times the number of simulated vertices.
struct BallSimulation {
  Words output;
  std::size_t simulated_vertices = 0;
  std::size_t peak_state_words = 0;
};
BallSimulation simulate_on_neighborhood_measured(const Neighborhood& nb,
                                                 const LocalAlgorithm& a);

}  // namespace mpcsim
