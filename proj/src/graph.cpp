#include "mpcsim/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "mpcsim/errors.hpp"

namespace mpcsim {

const char* to_string(SpaceLimit which) {
  switch (which) {
    case SpaceLimit::storage: return "storage";
    case SpaceLimit::outbox: return "outbox";
    case SpaceLimit::inbox: return "inbox";
  }
  return "?";
}

SpaceExceeded::SpaceExceeded(std::size_t machine, SpaceLimit which,
                             std::size_t words, std::size_t capacity)
    : std::runtime_error("machine " + std::to_string(machine) + " " +
                         to_string(which) + " holds " + std::to_string(words) +
                         " words, capacity " + std::to_string(capacity)),
      machine_(machine),
      which_(which),
      words_(words),
      capacity_(capacity) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n > kMaxVertices) throw InputError("at most 2^31 vertices supported");
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InputError("edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ") out of range for n=" +
                       std::to_string(n));
    }
    if (e.u == e.v) throw InputError("self-loop at " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end());
      dup != edges.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->u) + "," +
                     std::to_string(dup->v) + ")");
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[v],
              adjacency_.begin() + offsets_[v + 1]);
  }
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
  return {adjacency_.data() + offsets_.at(v), offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(VertexId v) const {
  return offsets_.at(v + 1) - offsets_[v];
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < n_; ++v) {
    best = std::max(best, offsets_[v + 1] - offsets_[v]);
  }
  return best;
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  if (keep.size() != n_) throw InputError("induced: mask size != n");
  std::vector<Edge> kept;
  for (const Edge& e : edges_) {
    if (keep[e.u] && keep[e.v]) kept.push_back(e);
  }
  return Graph(n_, std::move(kept));
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (u >= n_ || v >= n_) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph read_graph(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) {
    throw InputError("graph header must be \"n m\" with non-negative values");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v)) {
      throw InputError("expected " + std::to_string(m) + " edges, read " +
                       std::to_string(i));
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InputError("edge " + std::to_string(i) + " has an endpoint outside [0, n)");
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

LabeledEdge LabeledEdge::canonical() const {
  if (u <= v) return *this;
  return {v, u, {label.phase, label.rho_v, label.rho_u}};
}

LabeledMultigraph::LabeledMultigraph(std::size_t n,
                                     std::vector<LabeledEdge> edges,
                                     std::vector<VertexLabel> labels,
                                     std::size_t degree_bound)
    : n_(n), labels_(std::move(labels)) {
  if (labels_.empty()) labels_.resize(n);
  if (labels_.size() != n) throw InputError("vertex label count != n");
  for (LabeledEdge& e : edges) {
    if (e.u >= n || e.v >= n) throw InputError("labeled edge out of range");
    if (e.u == e.v) throw InputError("labeled self-loop");
    e = e.canonical();
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InputError("identical labeled edge records");
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(n, 0);
  for (const LabeledEdge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    offsets_[v + 1] = offsets_[v] + degree[v];
    max_degree_ = std::max(max_degree_, degree[v]);
  }
  incidence_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    incidence_[fill[edges_[i].u]++] = i;
    incidence_[fill[edges_[i].v]++] = i;
  }
  for (VertexId v = 0; v < n; ++v) {
    std::sort(incidence_.begin() + offsets_[v],
              incidence_.begin() + offsets_[v + 1],
              [&](std::uint32_t a, std::uint32_t b) {
                return incident_edge(v, a) < incident_edge(v, b);
              });
  }
  for (const VertexLabel& l : labels_) {
    label_words_ = std::max(label_words_, l.words.size());
  }
  if (degree_bound != 0 && degree_bound < max_degree_) {
    throw InputError("degree bound " + std::to_string(degree_bound) +
                     " below maximum degree " + std::to_string(max_degree_));
  }
  degree_bound_ = degree_bound != 0 ? degree_bound : max_degree_;
}

LabeledMultigraph LabeledMultigraph::from_graph(const Graph& g,
                                                std::vector<VertexLabel> labels) {
  std::vector<LabeledEdge> edges;
  edges.reserve(g.m());
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, {}});
  return LabeledMultigraph(g.n(), std::move(edges), std::move(labels));
}

std::span<const std::uint32_t> LabeledMultigraph::incident(VertexId v) const {
  return {incidence_.data() + offsets_.at(v), offsets_[v + 1] - offsets_[v]};
}

IncidentEdge LabeledMultigraph::incident_edge(VertexId v,
                                              std::uint32_t edge_index) const {
  const LabeledEdge& e = edges_[edge_index];
  if (e.u == v) return {e.v, e.label.phase, e.label.rho_u, e.label.rho_v};
  return {e.u, e.label.phase, e.label.rho_v, e.label.rho_u};
}

VertexId LabeledMultigraph::other_endpoint(VertexId v,
                                           std::uint32_t edge_index) const {
  const LabeledEdge& e = edges_[edge_index];
  return e.u == v ? e.v : e.u;
}

std::size_t LabeledMultigraph::degree(VertexId v,
                                      std::optional<std::uint64_t> phase) const {
  auto inc = incident(v);
  if (!phase) return inc.size();
  return static_cast<std::size_t>(
      std::count_if(inc.begin(), inc.end(), [&](std::uint32_t i) {
        return edges_[i].label.phase == *phase;
      }));
}

}  // namespace mpcsim
