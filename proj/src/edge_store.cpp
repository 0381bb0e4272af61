#include "mpcsim/edge_store.hpp"

#include <algorithm>

namespace mpcsim::edge_store {

std::size_t count_edges(MpcRun& run) {
  run.primitive_prefix_sum([](const Words&) { return 1; }, {}, false, is_edge);
  std::size_t count = 0;
  for (const Machine& m : run.machines()) {
    for (const Words& r : m.storage) {
      if (is_edge(r)) count = std::max<std::size_t>(count, r.back());
    }
  }
  return count;
}

void expand(MpcRun& run,
            const std::function<std::vector<Words>(std::size_t)>& extra) {
  run.exec_round([&](MachineContext& ctx) {
    std::vector<Words> next;
    for (Words& r : ctx.storage()) {
      if (!is_edge(r)) {
        next.push_back(std::move(r));
        continue;
      }
      const Edge e = unpack_edge(r[0]);
      next.push_back({kDirected, e.u, e.v});
      next.push_back({kDirected, e.v, e.u});
    }
    if (extra) {
      for (Words& r : extra(ctx.id())) next.push_back(std::move(r));
    }
    ctx.storage() = std::move(next);
  });
}

void remove_marked(MpcRun& run, const std::function<void(VertexId)>& on_removed) {
  // Remove records sort ahead of the directed records of the same vertex.
  run.primitive_sort([](const Words& a, const Words& b) {
    if (a[1] != b[1]) return a[1] < b[1];
    const bool ra = a[0] == kRemove, rb = b[0] == kRemove;
    if (ra != rb) return ra;
    return a < b;
  });
  run.primitive_prefix_sum(
      [](const Words& r) { return r[0] == kRemove ? 1 : 0; },
      [](const Words& r) { return r[1]; }, false,
      [](const Words& r) { return r[0] == kRemove || r[0] == kDirected; });
  run.exec_round([&](MachineContext& ctx) {
    std::vector<Words> next;
    for (const Words& r : ctx.storage()) {
      if (r[0] == kDirected && r.back() == 0) {
        const auto u = static_cast<VertexId>(r[1]), v = static_cast<VertexId>(r[2]);
        next.push_back({kSurvivor, pack_edge(std::min(u, v), std::max(u, v))});
      } else if (r[0] == kRemove && r.back() == 1 && on_removed) {
        on_removed(static_cast<VertexId>(r[1]));
      } else if (r[0] != kDirected && r[0] != kRemove) {
        next.push_back(r);
      }
    }
    ctx.storage() = std::move(next);
  });
  run.primitive_sort([](const Words& a, const Words& b) { return a < b; });
  run.primitive_prefix_sum([](const Words&) { return 1; },
                           [](const Words& r) { return r[1]; }, true,
                           [](const Words& r) { return r[0] == kSurvivor; });
  run.exec_round([&](MachineContext& ctx) {
    std::vector<Words> next;
    for (const Words& r : ctx.storage()) {
      if (r[0] != kSurvivor) {
        next.push_back(r);
      } else if (r[3] == 2 && r[2] == 1) {
        next.push_back({r[1]});
      }
    }
    ctx.storage() = std::move(next);
  });
}

std::vector<Edge> stored_edges(const MpcRun& run) {
  std::vector<Edge> edges;
  for (const Machine& m : run.machines()) {
    for (const Words& r : m.storage) {
      if (is_edge(r)) edges.push_back(unpack_edge(r[0]));
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Graph residual_graph(const MpcRun& run, std::size_t n) {
  return Graph(n, stored_edges(run));
}

std::vector<Words> remove_chunk(const std::vector<VertexId>& vertices,
                                std::size_t machine, std::size_t machines) {
  const std::size_t per = (vertices.size() + machines - 1) / std::max<std::size_t>(1, machines);
  std::vector<Words> out;
  const std::size_t lo = std::min(vertices.size(), machine * per);
  const std::size_t hi = std::min(vertices.size(), lo + per);
  for (std::size_t i = lo; i < hi; ++i) out.push_back({kRemove, vertices[i]});
  return out;
}

}  // namespace mpcsim::edge_store
