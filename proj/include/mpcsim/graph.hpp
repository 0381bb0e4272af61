#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mpcsim/types.hpp"

namespace mpcsim {

/// Undirected edge, stored with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph over vertex ids [0, n) in CSR form.
class Graph {
 public:
  Graph() = default;

  /// Throws InputError on self-loops, duplicate edges or ids >= n.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }

  /// Sorted, canonical (u < v).
  std::span<const Edge> edges() const { return edges_; }

  /// Sorted neighbor ids.
  std::span<const VertexId> neighbors(VertexId v) const;
  std::size_t degree(VertexId v) const;
  std::size_t max_degree() const;

  /// Same vertex set; keeps the edges whose endpoints are both kept.
  Graph induced(const std::vector<bool>& keep) const;

  bool has_edge(VertexId u, VertexId v) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
};

/// Text format: "n m" followed by m lines "u v".
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

/// Edge label of a sampled multigraph edge: the phase it was sampled for and
/// one rank draw per endpoint. rho_u belongs to the smaller endpoint.
struct EdgeLabel {
  std::uint64_t phase = 0;
  std::uint64_t rho_u = 0;
  std::uint64_t rho_v = 0;

  auto operator<=>(const EdgeLabel&) const = default;
};

inline constexpr std::size_t kEdgeLabelWords = 3;

struct LabeledEdge {
  VertexId u = 0;
  VertexId v = 0;
  EdgeLabel label;

  auto operator<=>(const LabeledEdge&) const = default;

  /// Swaps endpoints (and the per-endpoint draws) so that u < v.
  LabeledEdge canonical() const;
};

/// Per-vertex label: an opaque word string. Algorithms define the layout
/// (color bits, random bits, carried-over state, ...).
struct VertexLabel {
  Words words;

  auto operator<=>(const VertexLabel&) const = default;
};

/// An incident edge as seen from one endpoint: own draw first.
struct IncidentEdge {
  VertexId neighbor = 0;
  std::uint64_t phase = 0;
  std::uint64_t own_rho = 0;
  std::uint64_t other_rho = 0;

  auto operator<=>(const IncidentEdge&) const = default;
};

/// Edge-labeled multigraph with vertex labels and a declared degree bound.
/// Parallel edges are allowed as long as their labels differ.
class LabeledMultigraph {
 public:
  LabeledMultigraph() = default;

  /// degree_bound 0 means "use the actual maximum degree". Throws InputError
  /// on self-loops, out-of-range ids, identical edge records, a label vector
  /// of the wrong size, or a degree bound below the actual maximum degree.
  LabeledMultigraph(std::size_t n, std::vector<LabeledEdge> edges,
                    std::vector<VertexLabel> labels = {},
                    std::size_t degree_bound = 0);

  /// Unlabeled copy of a simple graph (all edge labels zero).
  static LabeledMultigraph from_graph(const Graph& g,
                                      std::vector<VertexLabel> labels = {});

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  std::span<const LabeledEdge> edges() const { return edges_; }
  const VertexLabel& label(VertexId v) const { return labels_.at(v); }
  std::span<const VertexLabel> labels() const { return labels_; }

  /// Indices into edges(), ordered by (neighbor, label as seen from v).
  std::span<const std::uint32_t> incident(VertexId v) const;
  IncidentEdge incident_edge(VertexId v, std::uint32_t edge_index) const;
  VertexId other_endpoint(VertexId v, std::uint32_t edge_index) const;

  /// Number of incident edges, optionally only those of one phase.
  std::size_t degree(VertexId v,
                     std::optional<std::uint64_t> phase = std::nullopt) const;
  std::size_t max_degree() const { return max_degree_; }
  std::size_t degree_bound() const { return degree_bound_; }

  /// Longest vertex label, in words (l_V).
  std::size_t label_words() const { return label_words_; }

 private:
  std::size_t n_ = 0;
  std::vector<LabeledEdge> edges_;
  std::vector<VertexLabel> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> incidence_;
  std::size_t max_degree_ = 0;
  std::size_t degree_bound_ = 0;
  std::size_t label_words_ = 0;
};

}  // namespace mpcsim
