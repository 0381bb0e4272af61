#include "mpcsim/mis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpcsim/edge_store.hpp"
#include "mpcsim/errors.hpp"
#include "mpcsim/oracles.hpp"
#include "mpcsim/random.hpp"

namespace mpcsim {

namespace {

// State words.
enum : std::size_t { kStatus, kMarked, kExponent, kCursor, kMaxExponent, kMisState };

std::uint32_t ceil_log2(std::size_t x) {
  std::uint32_t r = 0;
  while ((std::size_t{1} << r) < x) ++r;
  return r;
}

}  // namespace

bool bernoulli_from_bits(std::span<const Word> bits, std::size_t bit_count,
                         std::size_t& cursor, std::uint32_t i) {
  if (bit_count > bits.size() * 64) bit_count = bits.size() * 64;
  if (cursor + i > bit_count) {
    throw ContractViolation("random bit budget exhausted: need " + std::to_string(i) +
                            " bits at position " + std::to_string(cursor) + " of " +
                            std::to_string(bit_count));
  }
  bool all = true;
  for (std::uint32_t j = 0; j < i; ++j) {
    const std::size_t b = cursor + j;
    all = all && ((bits[b / 64] >> (b % 64)) & 1) != 0;
  }
  cursor += i;
  return all;
}

std::uint32_t mis_max_exponent(std::size_t Delta) {
  return ceil_log2(std::max<std::size_t>(Delta, 2)) + 1;
}

std::size_t mis_label_bits(std::size_t Delta, std::uint32_t c) {
  const std::size_t L = mis_max_exponent(Delta);
  return c * L * L;
}

LocalMis::LocalMis(std::size_t Delta, std::uint32_t c1, std::uint32_t c2,
                   std::uint32_t bit_constant)
    : iterations_(c1 * ceil_log2(std::max<std::size_t>(Delta, 2)) + c2),
      max_exponent_(mis_max_exponent(Delta)),
      label_bits_(mis_label_bits(Delta, bit_constant)) {
  if (iterations_ == 0) throw InputError("LocalMis needs at least one iteration");
}

bool LocalMis::draw(const VertexContext& v, Words& state) const {
  std::size_t cursor = state[kCursor];
  const bool b = bernoulli_from_bits(v.label.words, label_bits_, cursor,
                                     static_cast<std::uint32_t>(state[kExponent]));
  state[kCursor] = cursor;
  return b;
}

Words LocalMis::initial_state(const VertexContext& v) const {
  Words s(kMisState, 0);
  s[kStatus] = kUndecided;
  s[kExponent] = 1;
  s[kMaxExponent] = 1;
  s[kMarked] = draw(v, s) ? 1 : 0;
  return s;
}

std::vector<Words> LocalMis::send(const VertexContext& v, const Words& state,
                                  std::uint32_t round) const {
  if (round % 2 == 1) {
    return std::vector<Words>(v.edges.size(),
                              Words{state[kStatus], state[kMarked], state[kExponent]});
  }
  return std::vector<Words>(v.edges.size(), Words{state[kStatus]});
}

Words LocalMis::receive(const VertexContext& v, Words state,
                        std::span<const Words> inbox, std::uint32_t round) const {
  if (state[kStatus] != kUndecided) return state;
  const std::uint32_t L = max_exponent_;
  if (round % 2 == 1) {
    bool neighbor_marked = false;
    // Effective degree scaled by 2^L: sum of 2^(L - e_u).
    std::uint64_t effective = 0;
    for (const Words& m : inbox) {
      if (m[0] != kUndecided) continue;
      neighbor_marked = neighbor_marked || m[1] == 1;
      effective += std::uint64_t{1} << (L - m[2]);
    }
    if (state[kMarked] == 1 && !neighbor_marked) state[kStatus] = kInMis;
    const std::uint64_t e = state[kExponent];
    if (effective >= (std::uint64_t{2} << L)) {
      state[kExponent] = std::min<std::uint64_t>(L, e + 1);
    } else {
      state[kExponent] = std::max<std::uint64_t>(1, e - 1);
    }
    state[kMaxExponent] = std::max(state[kMaxExponent], state[kExponent]);
    return state;
  }
  for (const Words& m : inbox) {
    if (m[0] == kInMis) state[kStatus] = kRemoved;
  }
  state[kMarked] = 0;
  if (state[kStatus] == kUndecided && round < rounds()) {
    state[kMarked] = draw(v, state) ? 1 : 0;
  }
  return state;
}

Words LocalMis::output(const VertexContext&, const Words& state) const {
  return {state[kStatus], state[kMaxExponent], state[kCursor]};
}

std::vector<VertexLabel> mis_labels(std::size_t n, std::size_t words, std::uint64_t seed,
                                    std::uint64_t iteration) {
  std::vector<VertexLabel> labels(n);
  for (VertexId v = 0; v < n; ++v) {
    labels[v].words.resize(words);
    for (std::size_t j = 0; j < words; ++j) {
      labels[v].words[j] = hash_words(seed, {stream::kMisBits, iteration, v, j});
    }
  }
  return labels;
}

LowDegreePart low_degree_extract(const Graph& g, const std::vector<bool>& in_u,
                                 std::size_t Delta) {
  if (in_u.size() != g.n()) throw InputError("membership mask has the wrong size");
  LowDegreePart part;
  std::vector<VertexId> local(g.n(), kNoVertex);
  for (VertexId v = 0; v < g.n(); ++v) {
    if (!in_u[v]) continue;
    std::size_t d = 0;
    for (VertexId w : g.neighbors(v)) d += in_u[w] ? 1 : 0;
    if (d <= Delta) {
      local[v] = static_cast<VertexId>(part.vertices.size());
      part.vertices.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] != kNoVertex && local[e.v] != kNoVertex) {
      edges.push_back({local[e.u], local[e.v]});
    }
  }
  part.graph = Graph(part.vertices.size(), std::move(edges));
  return part;
}

namespace {

// Removes the decided vertices and the neighbors of new members from the
// stored residual: 3 + 3 rounds and 2 + 4 primitives.
void purge(MpcRun& run, const std::vector<VertexId>& joined,
           const std::vector<VertexId>& decided, std::vector<bool>& in_u) {
  using namespace edge_store;
  const std::size_t machines = run.machine_count();
  expand(run, [&](std::size_t machine) {
    std::vector<Words> extra = remove_chunk(decided, machine, machines);
    for (Words& r : remove_chunk(joined, machine, machines)) {
      r[0] = kVertex;
      extra.push_back(std::move(r));
    }
    return extra;
  });
  // Member records sort ahead of the directed records they flag.
  run.primitive_sort([](const Words& a, const Words& b) {
    if (a[1] != b[1]) return a[1] < b[1];
    const bool va = a[0] == kVertex, vb = b[0] == kVertex;
    if (va != vb) return va;
    return a < b;
  });
  run.primitive_prefix_sum([](const Words& r) { return r[0] == kVertex ? 1 : 0; },
                           [](const Words& r) { return r[1]; }, false,
                           [](const Words& r) { return r[0] == kVertex || r[0] == kDirected; });
  run.exec_round([&](MachineContext& ctx) {
    std::vector<Words> next;
    for (const Words& r : ctx.storage()) {
      if (r[0] == kDirected) {
        if (r[3] > 0) next.push_back({kRemove, r[2]});
        next.push_back({kDirected, r[1], r[2]});
      } else if (r[0] != kVertex) {
        next.push_back(r);
      }
    }
    ctx.storage() = std::move(next);
  });
  remove_marked(run, [&](VertexId v) { in_u[v] = false; });
}

}  // namespace

ArbMisResult arboricity_mis(MpcRun& run, const Graph& g, const ArbMisParams& params) {
  if (params.alpha < 1) throw InputError("alpha must be at least 1");
  if (params.gamma < 2) throw InputError("gamma must be at least 2");
  const std::size_t n = g.n();
  ArbMisResult res;
  res.degeneracy = degeneracy(g);
  res.alpha_consistent = res.degeneracy + 1 <= 2 * std::size_t{params.alpha};
  res.gamma_over_alpha = static_cast<double>(params.gamma) / params.alpha;

  const std::size_t Delta = 2 * std::size_t{params.alpha} * params.gamma;
  std::size_t passes = 0;
  while (std::pow(static_cast<double>(params.gamma), static_cast<double>(passes)) <
         static_cast<double>(n)) {
    ++passes;
  }
  passes += params.extra_passes;

  std::vector<bool> in_u(n, true);
  std::vector<bool> in_mis(n, false);
  std::size_t u_size = n;
  std::uint64_t iteration = 0;
  constexpr std::size_t kMaxFallbackPasses = 64;

  while (u_size > 0) {
    const bool compressed = res.outer_iterations < passes;
    if (!compressed && res.fallback_passes >= kMaxFallbackPasses) {
      throw ContractViolation("MIS fallback did not converge");
    }
    ++iteration;
    MisIteration it;
    it.compressed = compressed;
    it.u_before = u_size;

    // Degrees in G[U] from the stored residual: 2 rounds, 2 primitives.
    edge_store::expand(run);
    run.primitive_sort([](const Words& a, const Words& b) { return a < b; });
    run.primitive_prefix_sum([](const Words&) { return 1; },
                             [](const Words& r) { return r[1]; }, true,
                             [](const Words& r) { return r[0] == edge_store::kDirected; });
    run.exec_round([](MachineContext& ctx) {
      std::vector<Words> next;
      for (const Words& r : ctx.storage()) {
        if (r[0] != edge_store::kDirected) {
          next.push_back(r);
        } else if (r[1] < r[2]) {
          next.push_back({pack_edge(static_cast<VertexId>(r[1]), static_cast<VertexId>(r[2]))});
        }
      }
      ctx.storage() = std::move(next);
    });

    const Graph residual = edge_store::residual_graph(run, n);
    const std::size_t bound = compressed ? Delta : std::max<std::size_t>(2, residual.max_degree());
    LowDegreePart part = low_degree_extract(residual, in_u, bound);
    it.u_low = part.vertices.size();

    const std::size_t local_delta = compressed ? Delta : bound;
    const LocalMis mis(local_delta, params.c1, params.c2, params.bit_constant);
    it.max_exponent_allowed = mis.max_exponent();
    it.bit_budget = mis.label_bits();
    const LabeledMultigraph gp = LabeledMultigraph::from_graph(
        part.graph, mis_labels(part.vertices.size(), mis.label_words(), params.seed, iteration));
    LocalOutput out;
    if (compressed) {
      out = round_compression(run, gp, mis, params.compression);
      ++res.outer_iterations;
    } else {
      out = direct_mpc_simulation(run, gp, mis, 3);
      ++res.fallback_passes;
    }

    std::vector<VertexId> joined, decided;
    for (VertexId x = 0; x < out.size(); ++x) {
      const VertexId v = part.vertices[x];
      it.max_exponent_used = std::max<std::uint32_t>(it.max_exponent_used,
                                                     static_cast<std::uint32_t>(out[x][1]));
      it.max_bits_read = std::max<std::size_t>(it.max_bits_read, out[x][2]);
      if (out[x][0] == kInMis) {
        joined.push_back(v);
        in_mis[v] = true;
      }
      if (out[x][0] == kUndecided) {
        ++it.undecided;
      } else {
        decided.push_back(v);
      }
    }
    it.joined = joined.size();
    purge(run, joined, decided, in_u);
    u_size = static_cast<std::size_t>(std::count(in_u.begin(), in_u.end(), true));
    it.u_after = u_size;
    res.iterations.push_back(it);
  }

  for (VertexId v = 0; v < n; ++v) {
    if (in_mis[v]) res.mis.push_back(v);
  }
  res.rounds = run.stats().rounds_used;
  res.max_machine_words = run.stats().max_machine_words;
  res.total_words = run.stats().total_words;
  return res;
}

}  // namespace mpcsim
