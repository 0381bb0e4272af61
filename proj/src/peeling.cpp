#include <algorithm>
#include <string>

#include "mpcsim/edge_store.hpp"
#include "mpcsim/errors.hpp"
#include "mpcsim/random.hpp"
#include "peeling_internal.hpp"

namespace mpcsim {

namespace detail {

bool is_blue(std::uint64_t seed, std::uint64_t phase, VertexId v) {
  return (hash_words(seed, {stream::kColor, phase, v}) & 1) != 0;
}

VertexId friend_index(std::uint64_t seed, std::uint64_t phase, VertexId v,
                      std::size_t degree) {
  return static_cast<VertexId>(
      uniform_below(hash_words(seed, {stream::kFriend, phase, v}), degree));
}

void finalize(PeelingOutput& out, const MpcRun* run) {
  std::sort(out.matching.begin(), out.matching.end());
  std::sort(out.cover.begin(), out.cover.end());
  out.cover.erase(std::unique(out.cover.begin(), out.cover.end()), out.cover.end());
  if (run != nullptr) {
    out.rounds = run->stats().rounds_used;
    out.max_machine_words = run->stats().max_machine_words;
    out.total_words = run->stats().total_words;
  }
}

namespace {

void close_phase(PhaseTrace& ph) {
  std::sort(ph.heavy.begin(), ph.heavy.end());
  std::sort(ph.friends.begin(), ph.friends.end());
  ph.friends.erase(std::unique(ph.friends.begin(), ph.friends.end()), ph.friends.end());
  std::sort(ph.matched.begin(), ph.matched.end());
  std::sort(ph.covered.begin(), ph.covered.end());
  std::vector<VertexId> ends;
  for (const Edge& e : ph.matched) {
    ends.push_back(e.u);
    ends.push_back(e.v);
  }
  std::sort(ends.begin(), ends.end());
  ph.heavy_matched = 0;
  for (VertexId h : ph.heavy) {
    if (std::binary_search(ends.begin(), ends.end(), h)) ++ph.heavy_matched;
  }
}

}  // namespace

void peel_stored(MpcRun& run, double d, std::uint64_t seed, PeelingOutput& out) {
  using namespace edge_store;
  double delta = d;
  std::uint64_t phase = 0;
  while (delta >= 1) {
    if (count_edges(run) == 0) break;
    delta /= 2;
    ++phase;
    PhaseTrace ph;
    ph.source = "global";
    ph.phase = phase;
    ph.delta = delta;

    expand(run);
    run.primitive_sort([](const Words& a, const Words& b) { return a < b; });
    run.primitive_prefix_sum([](const Words&) { return 1; },
                             [](const Words& r) { return r[1]; }, true,
                             [](const Words& r) { return r[0] == kDirected; });
    // [tag, src, dst, rank, deg]: heavy sources claim their friend.
    run.exec_round([&](MachineContext& ctx) {
      std::vector<Words> next;
      for (const Words& r : ctx.storage()) {
        if (r[0] != kDirected) {
          next.push_back(r);
          continue;
        }
        const auto src = static_cast<VertexId>(r[1]);
        const std::size_t rank = r[3], deg = r[4];
        if (static_cast<double>(deg) >= delta) {
          if (rank == 1) next.push_back({kHeavy, src});
          if (rank - 1 == friend_index(seed, phase, src, deg)) {
            next.push_back({kClaim, r[2], src, is_blue(seed, phase, src) ? 1u : 0u});
          }
        }
        next.push_back({kDirected, r[1], r[2]});
      }
      ctx.storage() = std::move(next);
    });
    run.primitive_sort([](const Words& a, const Words& b) { return a < b; });
    run.primitive_prefix_sum([](const Words& r) { return r[3]; },
                             [](const Words& r) { return r[1]; }, true,
                             [](const Words& r) { return r[0] == kClaim; });
    // [tag, friend, claimant, blue, blue prefix, blue total]
    run.exec_round([&](MachineContext& ctx) {
      std::vector<Words> next;
      for (const Words& r : ctx.storage()) {
        if (r[0] == kHeavy) {
          ph.heavy.push_back(static_cast<VertexId>(r[1]));
          next.push_back({kRemove, r[1]});
        } else if (r[0] == kClaim) {
          const auto f = static_cast<VertexId>(r[1]);
          const auto v = static_cast<VertexId>(r[2]);
          ph.friends.push_back(f);
          next.push_back({kRemove, f});
          if (r[3] == 1 && r[5] == 1 && !is_blue(seed, phase, f)) {
            ph.matched.push_back({std::min(v, f), std::max(v, f)});
          }
        } else {
          next.push_back(r);
        }
      }
      ctx.storage() = std::move(next);
    });
    remove_marked(run, [&](VertexId v) { ph.covered.push_back(v); });

    close_phase(ph);
    out.matching.insert(out.matching.end(), ph.matched.begin(), ph.matched.end());
    out.cover.insert(out.cover.end(), ph.covered.begin(), ph.covered.end());
    out.phases.push_back(std::move(ph));
  }
}

}  // namespace detail

PeelingOutput global_peeling(const Graph& g, double d, std::uint64_t seed) {
  if (static_cast<double>(g.max_degree()) > d) {
    throw InputError("maximum degree " + std::to_string(g.max_degree()) +
                     " exceeds the bound " + std::to_string(d));
  }
  const std::size_t n = g.n();
  PeelingOutput out;
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> deg(n);
  for (VertexId v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::size_t edges = g.m();

  double delta = d;
  std::uint64_t phase = 0;
  std::vector<VertexId> nbrs;
  while (delta >= 1) {
    if (edges == 0) break;
    delta /= 2;
    ++phase;
    PhaseTrace ph;
    ph.source = "global";
    ph.phase = phase;
    ph.delta = delta;

    std::vector<std::size_t> blue_claims(n, 0);
    std::vector<std::pair<VertexId, VertexId>> claims;  // (claimant, friend)
    for (VertexId v = 0; v < n; ++v) {
      if (!alive[v] || deg[v] == 0 || static_cast<double>(deg[v]) < delta) continue;
      nbrs.clear();
      for (VertexId w : g.neighbors(v)) {
        if (alive[w]) nbrs.push_back(w);
      }
      const VertexId f = nbrs[detail::friend_index(seed, phase, v, nbrs.size())];
      ph.heavy.push_back(v);
      ph.friends.push_back(f);
      claims.emplace_back(v, f);
      if (detail::is_blue(seed, phase, v)) ++blue_claims[f];
    }
    for (const auto& [v, f] : claims) {
      if (detail::is_blue(seed, phase, v) && !detail::is_blue(seed, phase, f) &&
          blue_claims[f] == 1) {
        ph.matched.push_back({std::min(v, f), std::max(v, f)});
      }
    }
    std::vector<VertexId> removed = ph.heavy;
    removed.insert(removed.end(), ph.friends.begin(), ph.friends.end());
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    for (VertexId v : removed) alive[v] = false;
    for (VertexId v : removed) {
      for (VertexId w : g.neighbors(v)) {
        if (alive[w]) {
          --deg[w];
          --edges;
        } else if (v < w && std::binary_search(removed.begin(), removed.end(), w)) {
          --edges;
        }
      }
      deg[v] = 0;
    }
    ph.covered = removed;
    detail::close_phase(ph);
    out.matching.insert(out.matching.end(), ph.matched.begin(), ph.matched.end());
    out.cover.insert(out.cover.end(), ph.covered.begin(), ph.covered.end());
    out.phases.push_back(std::move(ph));
  }
  detail::finalize(out, nullptr);
  return out;
}

PeelingOutput mpc_global_peeling(MpcRun& run, const Graph& g, double d) {
  if (static_cast<double>(g.max_degree()) > d) {
    throw InputError("maximum degree " + std::to_string(g.max_degree()) +
                     " exceeds the bound " + std::to_string(d));
  }
  PeelingOutput out;
  detail::peel_stored(run, d, run.config().seed, out);
  detail::finalize(out, &run);
  return out;
}

}  // namespace mpcsim
