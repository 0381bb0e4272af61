#include "mpcsim/local.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "mpcsim/errors.hpp"

namespace mpcsim {

namespace {

// A vertex set with full incidence for every vertex that will be simulated.
// last_round[x] = t - dist(x): x receives in rounds k <= last_round and sends
// in rounds k <= last_round + 1. With last_round = t everywhere this is the
// plain synchronous execution; on a ball it simulates exactly the part of the
// execution the center's output depends on.
struct Topology {
  std::vector<VertexId> ids;
  std::vector<const VertexLabel*> labels;
  std::vector<std::vector<IncidentEdge>> edges;
  // peer[x][i] = (local index of the neighbor, position of the same edge in
  // the neighbor's list).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> peer;
  std::vector<long long> last_round;
};

struct EngineResult {
  std::vector<Words> outputs;  // aligned with `wanted`
  std::size_t simulated = 0;
  std::size_t peak_state = 0;
};

void check_state(const Words& state, const LocalAlgorithm& a, VertexId v) {
  if (state.size() > a.state_bound()) {
    throw ContractViolation("vertex " + std::to_string(v) + " state of " +
                            std::to_string(state.size()) +
                            " words exceeds s_A = " +
                            std::to_string(a.state_bound()));
  }
}

EngineResult run_engine(const Topology& topo, const LocalAlgorithm& a,
                        std::span<const std::uint32_t> wanted) {
  const std::uint32_t t = a.rounds();
  const std::size_t n = topo.ids.size();
  static const VertexLabel kEmpty{};

  auto ctx = [&](std::uint32_t x) {
    return VertexContext{topo.ids[x], topo.labels[x] ? *topo.labels[x] : kEmpty,
                         topo.edges[x]};
  };

  EngineResult res;
  std::vector<Words> state(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    if (topo.last_round[x] < 0) continue;
    state[x] = a.initial_state(ctx(x));
    check_state(state[x], a, topo.ids[x]);
    res.peak_state = std::max(res.peak_state, state[x].size());
    ++res.simulated;
  }

  std::vector<std::vector<Words>> out(n);
  std::vector<Words> inbox;
  for (std::uint32_t k = 1; k <= t; ++k) {
    for (std::uint32_t x = 0; x < n; ++x) {
      if (static_cast<long long>(k) > topo.last_round[x] + 1) continue;
      out[x] = a.send(ctx(x), state[x], k);
      if (out[x].size() != topo.edges[x].size()) {
        throw ContractViolation("send() must return one message per incident edge");
      }
    }
    for (std::uint32_t x = 0; x < n; ++x) {
      if (static_cast<long long>(k) > topo.last_round[x]) continue;
      inbox.assign(topo.edges[x].size(), Words{});
      for (std::size_t i = 0; i < topo.edges[x].size(); ++i) {
        const auto [y, j] = topo.peer[x][i];
        if (static_cast<long long>(k) > topo.last_round[y] + 1) {
          throw ContractViolation("neighbor state unavailable: ball too small");
        }
        inbox[i] = out[y][j];
      }
      state[x] = a.receive(ctx(x), std::move(state[x]), inbox, k);
      check_state(state[x], a, topo.ids[x]);
      res.peak_state = std::max(res.peak_state, state[x].size());
    }
    for (auto& o : out) o.clear();
  }

  res.outputs.reserve(wanted.size());
  for (std::uint32_t x : wanted) {
    Words o = a.output(ctx(x), state[x]);
    if (o.size() > a.output_bound()) {
      throw ContractViolation("output of vertex " + std::to_string(topo.ids[x]) +
                              " exceeds l_out");
    }
    res.outputs.push_back(std::move(o));
  }
  return res;
}

}  // namespace

LocalOutput simulate_local_direct(const LabeledMultigraph& g,
                                  const LocalAlgorithm& a) {
  const std::size_t n = g.n();
  Topology topo;
  topo.ids.resize(n);
  topo.labels.resize(n);
  topo.edges.resize(n);
  topo.peer.resize(n);
  topo.last_round.assign(n, a.rounds());

  // Position of each edge in each endpoint's list.
  std::vector<std::uint32_t> pos_u(g.m()), pos_v(g.m());
  for (VertexId v = 0; v < n; ++v) {
    auto inc = g.incident(v);
    for (std::uint32_t i = 0; i < inc.size(); ++i) {
      const LabeledEdge& e = g.edges()[inc[i]];
      (e.u == v ? pos_u : pos_v)[inc[i]] = i;
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    topo.ids[v] = v;
    topo.labels[v] = &g.label(v);
    auto inc = g.incident(v);
    topo.edges[v].reserve(inc.size());
    topo.peer[v].reserve(inc.size());
    for (std::uint32_t ei : inc) {
      const LabeledEdge& e = g.edges()[ei];
      topo.edges[v].push_back(g.incident_edge(v, ei));
      if (e.u == v) {
        topo.peer[v].push_back({e.v, pos_v[ei]});
      } else {
        topo.peer[v].push_back({e.u, pos_u[ei]});
      }
    }
  }
  std::vector<std::uint32_t> wanted(n);
  for (std::uint32_t v = 0; v < n; ++v) wanted[v] = v;
  return run_engine(topo, a, wanted).outputs;
}

BallSimulation simulate_on_neighborhood_measured(const Neighborhood& nb,
                                                 const LocalAlgorithm& a) {
  const std::uint32_t t = a.rounds();
  if (nb.radius < t) {
    throw InputError("neighborhood radius " + std::to_string(nb.radius) +
                     " below algorithm rounds " + std::to_string(t));
  }
  const BallDistances bd = ball_distances(nb);
  Topology topo;
  std::unordered_map<VertexId, std::uint32_t> local;
  local.reserve(bd.order.size());
  for (std::size_t i = 0; i < bd.order.size(); ++i) {
    const VertexId v = bd.order[i];
    local.emplace(v, static_cast<std::uint32_t>(i));
    topo.ids.push_back(v);
    topo.labels.push_back(nb.label_of(v));
    topo.last_round.push_back(static_cast<long long>(t) - bd.distance[i]);
  }
  const std::size_t n = topo.ids.size();
  topo.edges.resize(n);
  topo.peer.resize(n);

  // Collect (incident edge, edge record index) per endpoint, then sort into
  // the same order the host graph uses.
  std::vector<std::vector<std::pair<IncidentEdge, std::uint32_t>>> lists(n);
  for (std::uint32_t ei = 0; ei < nb.edges.size(); ++ei) {
    const LabeledEdge& e = nb.edges[ei];
    lists[local.at(e.u)].push_back(
        {{e.v, e.label.phase, e.label.rho_u, e.label.rho_v}, ei});
    lists[local.at(e.v)].push_back(
        {{e.u, e.label.phase, e.label.rho_v, e.label.rho_u}, ei});
  }
  std::vector<std::uint32_t> pos_u(nb.edges.size()), pos_v(nb.edges.size());
  for (std::uint32_t x = 0; x < n; ++x) {
    std::sort(lists[x].begin(), lists[x].end());
    for (std::uint32_t i = 0; i < lists[x].size(); ++i) {
      const std::uint32_t ei = lists[x][i].second;
      (nb.edges[ei].u == topo.ids[x] ? pos_u : pos_v)[ei] = i;
    }
  }
  for (std::uint32_t x = 0; x < n; ++x) {
    for (const auto& [ie, ei] : lists[x]) {
      const LabeledEdge& e = nb.edges[ei];
      topo.edges[x].push_back(ie);
      if (e.u == topo.ids[x]) {
        topo.peer[x].push_back({local.at(e.v), pos_v[ei]});
      } else {
        topo.peer[x].push_back({local.at(e.u), pos_u[ei]});
      }
    }
  }

  const std::uint32_t center = 0;
  EngineResult res = run_engine(topo, a, std::span(&center, 1));
  return {std::move(res.outputs.front()), res.simulated, res.peak_state};
}

Words simulate_on_neighborhood(const Neighborhood& nb, const LocalAlgorithm& a) {
  return simulate_on_neighborhood_measured(nb, a).output;
}

}  // namespace mpcsim
