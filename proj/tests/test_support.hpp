#pragma once

// Small LOCAL algorithms and graph builders shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/local.hpp"
#include "mpcsim/random.hpp"

namespace mpcsim::testing {

/// Outputs the largest id within distance t.
class MaxIdWithin final : public LocalAlgorithm {
 public:
  explicit MaxIdWithin(std::uint32_t t) : t_(t) {}
  std::uint32_t rounds() const override { return t_; }
  std::size_t state_bound() const override { return 1; }
  std::size_t output_bound() const override { return 1; }
  Words initial_state(const VertexContext& v) const override { return {v.id}; }
  std::vector<Words> send(const VertexContext& v, const Words& s,
                          std::uint32_t) const override {
    return std::vector<Words>(v.edges.size(), s);
  }
  Words receive(const VertexContext&, Words s, std::span<const Words> inbox,
                std::uint32_t) const override {
    for (const Words& m : inbox) s[0] = std::max(s[0], m[0]);
    return s;
  }
  Words output(const VertexContext&, const Words& s) const override { return s; }

 private:
  std::uint32_t t_;
};

/// Mixes labels, edge labels, incoming messages and the round number into a
/// hash chain, so any difference in what a vertex sees changes its output.
class HashChain final : public LocalAlgorithm {
 public:
  explicit HashChain(std::uint32_t t) : t_(t) {}
  std::uint32_t rounds() const override { return t_; }
  std::size_t state_bound() const override { return 2; }
  std::size_t output_bound() const override { return 2; }
  Words initial_state(const VertexContext& v) const override {
    std::uint64_t h = hash_words(v.id, {v.edges.size()});
    for (Word w : v.label.words) h = hash_words(h, {w});
    return {h, 0};
  }
  std::vector<Words> send(const VertexContext& v, const Words& s,
                          std::uint32_t round) const override {
    std::vector<Words> out;
    for (const IncidentEdge& e : v.edges) {
      out.push_back({hash_words(s[0], {round, e.phase, e.own_rho, e.other_rho})});
    }
    return out;
  }
  Words receive(const VertexContext& v, Words s, std::span<const Words> inbox,
                std::uint32_t round) const override {
    for (std::size_t i = 0; i < inbox.size(); ++i) {
      s[0] = hash_words(s[0], {round, v.edges[i].neighbor, inbox[i][0]});
    }
    s[1] += inbox.size();
    return s;
  }
  Words output(const VertexContext&, const Words& s) const override { return s; }

 private:
  std::uint32_t t_;
};

/// Outputs its own label (t = 0).
class OwnLabel final : public LocalAlgorithm {
 public:
  std::uint32_t rounds() const override { return 0; }
  std::size_t state_bound() const override { return 0; }
  std::size_t output_bound() const override { return 8; }
  Words initial_state(const VertexContext&) const override { return {}; }
  std::vector<Words> send(const VertexContext& v, const Words&,
                          std::uint32_t) const override {
    return std::vector<Words>(v.edges.size());
  }
  Words receive(const VertexContext&, Words s, std::span<const Words>,
                std::uint32_t) const override {
    return s;
  }
  Words output(const VertexContext& v, const Words&) const override {
    return v.label.words;
  }
};

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph(n, std::move(e));
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  e.push_back({0, static_cast<VertexId>(n - 1)});
  return Graph(n, std::move(e));
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (VertexId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph(leaves + 1, std::move(e));
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph(n, std::move(e));
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (VertexId i = 0; i < 5; ++i) {
    e.push_back({i, static_cast<VertexId>((i + 1) % 5)});
    e.push_back({i, static_cast<VertexId>(i + 5)});
    e.push_back({static_cast<VertexId>(i + 5), static_cast<VertexId>(5 + (i + 2) % 5)});
  }
  for (Edge& x : e) {
    if (x.u > x.v) std::swap(x.u, x.v);
  }
  return Graph(10, std::move(e));
}

/// G(n, p) from a hash stream.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::vector<Edge> e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (unit_interval(hash_words(seed, {u, v})) < p) e.push_back({u, v});
  return Graph(n, std::move(e));
}

/// Random labeled multigraph with maximum degree <= d: candidate edges are
/// kept while both endpoints have room. Parallel edges get distinct labels.
inline LabeledMultigraph random_labeled(std::size_t n, std::size_t d, std::size_t label_words,
                                        std::uint64_t seed) {
  std::vector<std::size_t> deg(n, 0);
  std::vector<LabeledEdge> edges;
  if (n >= 2) {
    const std::size_t attempts = n * d;
    for (std::size_t i = 0; i < attempts; ++i) {
      const auto u = static_cast<VertexId>(uniform_below(hash_words(seed, {1, i}), n));
      const auto v = static_cast<VertexId>(uniform_below(hash_words(seed, {2, i}), n));
      if (u == v || deg[u] >= d || deg[v] >= d) continue;
      ++deg[u];
      ++deg[v];
      edges.push_back(LabeledEdge{u, v,
                                  {uniform_below(hash_words(seed, {3, i}), 4),
                                   hash_words(seed, {4, i}) % 1000, i}}
                          .canonical());
    }
  }
  std::vector<VertexLabel> labels(n);
  for (VertexId v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < label_words; ++j) {
      labels[v].words.push_back(hash_words(seed, {5, v, j}));
    }
  }
  return LabeledMultigraph(n, std::move(edges), std::move(labels), d);
}

/// Maximum matching by plain include/exclude recursion over the edge list,
/// independent of the memoized oracle. For small graphs only.
inline std::size_t matching_by_edge_recursion(const Graph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<bool> used(g.n(), false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t size) {
    if (size + (edges.size() - i) <= best) return;
    if (i == edges.size()) {
      best = std::max(best, size);
      return;
    }
    const Edge e = edges[i];
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = true;
      go(i + 1, size + 1);
      used[e.u] = used[e.v] = false;
    }
    go(i + 1, size);
  };
  go(0, 0);
  return best;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[h] : (xs[h - 1] + xs[h]) / 2;
}

}  // namespace mpcsim::testing
