#include "mpcsim/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

#include "mpcsim/errors.hpp"

namespace mpcsim {

namespace {

class MatchingSearch {
 public:
  explicit MatchingSearch(const Graph& g)
      : g_(g), adj_(g.n(), 0), memo_(std::size_t{1} << g.n(), -1) {
    for (const Edge& e : g.edges()) {
      adj_[e.u] |= std::uint32_t{1} << e.v;
      adj_[e.v] |= std::uint32_t{1} << e.u;
    }
  }

  int best(std::uint32_t mask) {
    if (mask == 0) return 0;
    if (memo_[mask] >= 0) return memo_[mask];
    const int v = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(std::uint32_t{1} << v);
    int b = best(rest);
    for (std::uint32_t nb = adj_[v] & rest; nb != 0; nb &= nb - 1) {
      const int u = std::countr_zero(nb);
      b = std::max(b, 1 + best(rest & ~(std::uint32_t{1} << u)));
    }
    memo_[mask] = static_cast<std::int8_t>(b);
    return b;
  }

  std::vector<Edge> witness(std::uint32_t mask) {
    std::vector<Edge> out;
    while (mask != 0) {
      const int target = best(mask);
      const int v = std::countr_zero(mask);
      const std::uint32_t rest = mask & ~(std::uint32_t{1} << v);
      if (best(rest) == target) {
        mask = rest;
        continue;
      }
      for (std::uint32_t nb = adj_[v] & rest; nb != 0; nb &= nb - 1) {
        const int u = std::countr_zero(nb);
        const std::uint32_t next = rest & ~(std::uint32_t{1} << u);
        if (1 + best(next) == target) {
          out.push_back({static_cast<VertexId>(v), static_cast<VertexId>(u)});
          mask = next;
          break;
        }
      }
    }
    return out;
  }

 private:
  const Graph& g_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::int8_t> memo_;
};

class CoverSearch {
 public:
  explicit CoverSearch(const Graph& g) : g_(g), in_(g.n(), false) {
    best_.resize(g.n());
    for (VertexId v = 0; v < g.n(); ++v) best_[v] = v;  // V is a cover
    chosen_.reserve(g.n());
  }

  std::vector<VertexId> solve() {
    search();
    return best_;
  }

 private:
  bool covered(const Edge& e) const { return in_[e.u] || in_[e.v]; }

  std::size_t lower_bound() const {
    std::vector<bool> used(g_.n(), false);
    std::size_t m = 0;
    for (const Edge& e : g_.edges()) {
      if (covered(e) || used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = true;
      ++m;
    }
    return m;
  }

  void search() {
    if (chosen_.size() + lower_bound() >= best_.size()) return;
    // Vertex of largest uncovered degree.
    VertexId u = kNoVertex;
    std::size_t top = 0;
    for (VertexId v = 0; v < g_.n(); ++v) {
      if (in_[v]) continue;
      std::size_t d = 0;
      for (VertexId w : g_.neighbors(v)) d += in_[w] ? 0 : 1;
      if (d > top) {
        top = d;
        u = v;
      }
    }
    if (u == kNoVertex) {
      best_ = chosen_;
      return;
    }
    take(u);
    search();
    untake(1);
    std::size_t added = 0;
    for (VertexId w : g_.neighbors(u)) {
      if (!in_[w]) {
        take(w);
        ++added;
      }
    }
    search();
    untake(added);
  }

  void take(VertexId v) {
    in_[v] = true;
    chosen_.push_back(v);
  }
  void untake(std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      in_[chosen_.back()] = false;
      chosen_.pop_back();
    }
  }

  const Graph& g_;
  std::vector<bool> in_;
  std::vector<VertexId> chosen_;
  std::vector<VertexId> best_;
};

}  // namespace

MatchingWitness max_matching_exact(const Graph& g, const OracleBudget& budget) {
  if (g.n() > budget.max_n_exact_matching || g.n() > 30) {
    throw BudgetExceeded("exact matching limited to n <= " +
                         std::to_string(budget.max_n_exact_matching));
  }
  MatchingSearch s(g);
  const std::uint32_t all =
      g.n() == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << g.n()) - 1);
  MatchingWitness w;
  w.size = static_cast<std::size_t>(s.best(all));
  w.edges = s.witness(all);
  std::sort(w.edges.begin(), w.edges.end());
  return w;
}

CoverWitness min_vertex_cover_exact(const Graph& g, const OracleBudget& budget) {
  if (g.n() > budget.max_n_exact_cover) {
    throw BudgetExceeded("exact vertex cover limited to n <= " +
                         std::to_string(budget.max_n_exact_cover));
  }
  CoverSearch s(g);
  CoverWitness w;
  w.vertices = s.solve();
  std::sort(w.vertices.begin(), w.vertices.end());
  w.size = w.vertices.size();
  return w;
}

bool check_matching(const Graph& g, std::span<const Edge> matching) {
  std::vector<bool> used(g.n(), false);
  for (const Edge& e : matching) {
    if (e.u >= g.n() || e.v >= g.n() || !g.has_edge(e.u, e.v)) return false;
    if (used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = true;
  }
  return true;
}

bool check_cover(const Graph& g, std::span<const VertexId> cover) {
  std::vector<bool> in(g.n(), false);
  for (VertexId v : cover) {
    if (v >= g.n()) return false;
    in[v] = true;
  }
  for (const Edge& e : g.edges()) {
    if (!in[e.u] && !in[e.v]) return false;
  }
  return true;
}

bool check_mis(const Graph& g, std::span<const VertexId> set) {
  std::vector<bool> in(g.n(), false);
  for (VertexId v : set) {
    if (v >= g.n()) return false;
    in[v] = true;
  }
  for (const Edge& e : g.edges()) {
    if (in[e.u] && in[e.v]) return false;
  }
  for (VertexId v = 0; v < g.n(); ++v) {
    if (in[v]) continue;
    bool dominated = false;
    for (VertexId w : g.neighbors(v)) dominated = dominated || in[w];
    if (!dominated) return false;
  }
  return true;
}

std::size_t degeneracy(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<std::size_t> deg(n);
  std::size_t maxd = 0;
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxd = std::max(maxd, deg[v]);
  }
  std::vector<std::vector<VertexId>> bucket(maxd + 1);
  for (VertexId v = 0; v < n; ++v) bucket[deg[v]].push_back(v);
  std::vector<bool> gone(n, false);
  std::size_t k = 0, d = 0;
  for (std::size_t done = 0; done < n;) {
    d = std::min(d, maxd);
    while (bucket[d].empty()) ++d;
    const VertexId v = bucket[d].back();
    bucket[d].pop_back();
    if (gone[v] || deg[v] != d) continue;
    gone[v] = true;
    ++done;
    k = std::max(k, d);
    for (VertexId w : g.neighbors(v)) {
      if (gone[w]) continue;
      --deg[w];
      bucket[deg[w]].push_back(w);
    }
    if (d > 0) --d;
  }
  return k;
}

}  // namespace mpcsim
