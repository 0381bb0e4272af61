#include "mpcsim/neighborhood.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>

#include "mpcsim/errors.hpp"

namespace mpcsim {

namespace {

const CoreVertex* find_core(const std::vector<CoreVertex>& core, VertexId v) {
  auto it = std::lower_bound(
      core.begin(), core.end(), v,
      [](const CoreVertex& c, VertexId id) { return c.id < id; });
  if (it == core.end() || it->id != v) return nullptr;
  return &*it;
}

}  // namespace

bool Neighborhood::contains(VertexId v) const {
  return find_core(core, v) != nullptr;
}

const VertexLabel* Neighborhood::label_of(VertexId v) const {
  const CoreVertex* c = find_core(core, v);
  return c ? &c->label : nullptr;
}

std::vector<VertexId> Neighborhood::frontier() const {
  std::vector<VertexId> out;
  for (const LabeledEdge& e : edges) {
    if (!contains(e.u)) out.push_back(e.u);
    if (!contains(e.v)) out.push_back(e.v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Neighborhood::words() const {
  std::size_t total = kNeighborhoodHeaderWords + edges.size() * kEdgeRecordWords;
  for (const CoreVertex& c : core) total += 2 + c.label.words.size();
  return total;
}

Words Neighborhood::serialize() const {
  Words out;
  out.reserve(words());
  out.push_back(center);
  out.push_back(radius);
  out.push_back(core.size());
  out.push_back(edges.size());
  for (const CoreVertex& c : core) {
    out.push_back(c.id);
    out.push_back(c.label.words.size());
    out.insert(out.end(), c.label.words.begin(), c.label.words.end());
  }
  for (const LabeledEdge& e : edges) {
    out.insert(out.end(), {e.u, e.v, e.label.phase, e.label.rho_u, e.label.rho_v});
  }
  return out;
}

Neighborhood Neighborhood::deserialize(std::span<const Word> words) {
  std::size_t pos = 0;
  auto next = [&]() -> Word {
    if (pos >= words.size()) throw InputError("truncated neighborhood encoding");
    return words[pos++];
  };
  Neighborhood nb;
  nb.center = static_cast<VertexId>(next());
  nb.radius = static_cast<std::uint32_t>(next());
  const std::size_t core_count = next();
  const std::size_t edge_count = next();
  nb.core.resize(core_count);
  for (CoreVertex& c : nb.core) {
    c.id = static_cast<VertexId>(next());
    const std::size_t len = next();
    c.label.words.resize(len);
    for (Word& w : c.label.words) w = next();
  }
  nb.edges.resize(edge_count);
  for (LabeledEdge& e : nb.edges) {
    e.u = static_cast<VertexId>(next());
    e.v = static_cast<VertexId>(next());
    e.label.phase = next();
    e.label.rho_u = next();
    e.label.rho_v = next();
  }
  if (pos != words.size()) throw InputError("trailing words in neighborhood encoding");
  return nb;
}

Neighborhood neighborhood(const LabeledMultigraph& g, VertexId v,
                          std::uint32_t radius) {
  if (v >= g.n()) {
    throw InputError("neighborhood: vertex " + std::to_string(v) +
                     " out of range");
  }
  std::unordered_map<VertexId, std::uint32_t> dist;
  std::vector<VertexId> order{v};
  dist.emplace(v, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const VertexId x = order[head];
    const std::uint32_t dx = dist[x];
    if (dx == radius) continue;
    for (std::uint32_t ei : g.incident(x)) {
      const VertexId y = g.other_endpoint(x, ei);
      if (dist.emplace(y, dx + 1).second) order.push_back(y);
    }
  }

  Neighborhood nb;
  nb.center = v;
  nb.radius = radius;
  std::sort(order.begin(), order.end());
  nb.core.reserve(order.size());
  std::vector<std::uint32_t> edge_ids;
  for (VertexId x : order) {
    nb.core.push_back({x, g.label(x)});
    auto inc = g.incident(x);
    edge_ids.insert(edge_ids.end(), inc.begin(), inc.end());
  }
  std::sort(edge_ids.begin(), edge_ids.end());
  edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
  nb.edges.reserve(edge_ids.size());
  // edges() is sorted, so increasing ids give sorted records.
  for (std::uint32_t ei : edge_ids) nb.edges.push_back(g.edges()[ei]);
  return nb;
}

BallDistances ball_distances(const Neighborhood& nb) {
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (const LabeledEdge& e : nb.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& [_, list] : adj) std::sort(list.begin(), list.end());

  BallDistances out;
  std::unordered_map<VertexId, std::uint32_t> dist;
  out.order.push_back(nb.center);
  out.distance.push_back(0);
  dist.emplace(nb.center, 0);
  for (std::size_t head = 0; head < out.order.size(); ++head) {
    const VertexId x = out.order[head];
    const std::uint32_t dx = out.distance[head];
    // Only core vertices have complete adjacency inside the ball.
    if (dx > nb.radius) continue;
    auto it = adj.find(x);
    if (it == adj.end()) continue;
    for (VertexId y : it->second) {
      if (dist.emplace(y, dx + 1).second) {
        out.order.push_back(y);
        out.distance.push_back(dx + 1);
      }
    }
  }
  return out;
}

Neighborhood restrict_radius(const Neighborhood& nb, std::uint32_t radius) {
  if (radius > nb.radius) {
    throw InputError("restrict_radius: requested radius exceeds the ball");
  }
  if (radius == nb.radius) return nb;
  const BallDistances bd = ball_distances(nb);
  std::vector<VertexId> keep;
  for (std::size_t i = 0; i < bd.order.size(); ++i) {
    if (bd.distance[i] <= radius) keep.push_back(bd.order[i]);
  }
  std::sort(keep.begin(), keep.end());
  auto kept = [&](VertexId v) {
    return std::binary_search(keep.begin(), keep.end(), v);
  };
  Neighborhood out;
  out.center = nb.center;
  out.radius = radius;
  for (const CoreVertex& c : nb.core) {
    if (kept(c.id)) out.core.push_back(c);
  }
  for (const LabeledEdge& e : nb.edges) {
    if (kept(e.u) || kept(e.v)) out.edges.push_back(e);
  }
  return out;
}

Neighborhood combine_neighborhoods(const Neighborhood& base,
                                   std::span<const Neighborhood> extensions,
                                   std::uint32_t extension_radius) {
  const std::vector<VertexId> frontier = base.frontier();
  std::vector<VertexId> centers;
  centers.reserve(extensions.size());
  for (const Neighborhood& ext : extensions) {
    if (ext.radius != extension_radius) {
      throw InputError("combine: extension radius " + std::to_string(ext.radius) +
                       " != " + std::to_string(extension_radius));
    }
    centers.push_back(ext.center);
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  for (VertexId c : centers) {
    if (!std::binary_search(frontier.begin(), frontier.end(), c)) {
      throw InputError("combine: extension centered at " + std::to_string(c) +
                       " is not at distance r+1");
    }
  }
  for (VertexId w : frontier) {
    if (!std::binary_search(centers.begin(), centers.end(), w)) {
      throw IncompletenessError("combine: no extension for frontier vertex " +
                                std::to_string(w));
    }
  }

  Neighborhood out;
  out.center = base.center;
  out.radius = base.radius + extension_radius + 1;
  out.core = base.core;
  out.edges = base.edges;
  for (const Neighborhood& ext : extensions) {
    out.core.insert(out.core.end(), ext.core.begin(), ext.core.end());
    out.edges.insert(out.edges.end(), ext.edges.begin(), ext.edges.end());
  }
  std::sort(out.core.begin(), out.core.end());
  out.core.erase(std::unique(out.core.begin(), out.core.end()), out.core.end());
  for (std::size_t i = 1; i < out.core.size(); ++i) {
    if (out.core[i].id == out.core[i - 1].id) {
      throw ContractViolation("combine: conflicting labels for vertex " +
                              std::to_string(out.core[i].id));
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()),
                  out.edges.end());
  return out;
}

}  // namespace mpcsim
