#include "mpcsim/compression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "mpcsim/errors.hpp"
#include "mpcsim/random.hpp"

namespace mpcsim {

namespace {

constexpr Word kVertexRecord = 0;
constexpr Word kEdgeRecord = 1;

std::size_t saturating_size(double words) {
  constexpr double kMax = static_cast<double>(std::numeric_limits<std::size_t>::max() / 8);
  if (!(words < kMax)) return static_cast<std::size_t>(kMax);
  return static_cast<std::size_t>(std::ceil(words));
}

// Records that carry the input graph to the vertex owners: one per vertex
// [v, 0, label...] and one per edge endpoint [v, 1, u, w, phase, rho_u, rho_w].
std::vector<Words> input_records(const LabeledMultigraph& g) {
  std::vector<Words> records;
  records.reserve(g.n() + 2 * g.m());
  for (VertexId v = 0; v < g.n(); ++v) {
    Words r{v, kVertexRecord};
    const Words& lab = g.label(v).words;
    r.insert(r.end(), lab.begin(), lab.end());
    records.push_back(std::move(r));
  }
  for (const LabeledEdge& e : g.edges()) {
    for (VertexId end : {e.u, e.v}) {
      records.push_back({end, kEdgeRecord, e.u, e.v, e.label.phase,
                         e.label.rho_u, e.label.rho_v});
    }
  }
  return records;
}

bool record_less(const Words& a, const Words& b) { return a < b; }

std::size_t machines_for(std::size_t n, std::size_t per_machine) {
  return std::max<std::size_t>(1, (n + per_machine - 1) / per_machine);
}

struct Layout {
  std::size_t capacity = 1;
  std::size_t vertices_per_machine = 1;
  std::size_t machines = 1;
};

Layout layout_for(const MpcRun& run, std::size_t n, const CompressionPlan& p,
                  double factor) {
  const std::size_t S = run.config().S;
  const double need = factor * p.s_star;
  Layout l;
  l.capacity = std::max(S, saturating_size(need));
  l.vertices_per_machine =
      std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(S) / need));
  l.machines = machines_for(n, l.vertices_per_machine);
  return l;
}

// Sizes of N_rho(v) for rho <= t plus the BFS layers up to distance t.
struct BallProfile {
  std::vector<std::size_t> words;        // words[rho], rho = 0..t
  std::vector<VertexId> order;           // vertices by distance, up to t
  std::vector<std::uint32_t> layer_end;  // order[layer_end[d-1]..layer_end[d])
  std::size_t layer(std::uint32_t d, std::size_t* begin) const {
    *begin = d == 0 ? 0 : layer_end[d - 1];
    return layer_end[d];
  }
};

class ProfileBuilder {
 public:
  explicit ProfileBuilder(const LabeledMultigraph& g)
      : g_(g), stamp_(g.n(), 0), dist_(g.n(), 0) {}

  BallProfile build(VertexId v, std::uint32_t t) {
    ++epoch_;
    BallProfile p;
    std::vector<std::size_t> vertex_words(t + 1, 0), edge_count(t + 1, 0);
    p.order.push_back(v);
    see(v, 0);
    std::size_t head = 0;
    while (head < p.order.size()) {
      const VertexId x = p.order[head++];
      const std::uint32_t d = dist_[x];
      vertex_words[d] += 2 + g_.label(x).words.size();
      for (std::uint32_t ei : g_.incident(x)) {
        const VertexId y = g_.other_endpoint(x, ei);
        if (!seen(y)) {
          see(y, d + 1);
          if (d + 1 <= t) p.order.push_back(y);
        }
        const std::uint32_t dy = dist_[y];
        if (dy > d || (dy == d && x < y)) ++edge_count[d];
      }
    }
    p.layer_end.assign(t + 1, 0);
    for (VertexId x : p.order) ++p.layer_end[dist_[x]];
    for (std::uint32_t d = 1; d <= t; ++d) p.layer_end[d] += p.layer_end[d - 1];
    p.words.assign(t + 1, 0);
    std::size_t acc = kNeighborhoodHeaderWords;
    for (std::uint32_t d = 0; d <= t; ++d) {
      acc += vertex_words[d] + kEdgeRecordWords * edge_count[d];
      p.words[d] = acc;
    }
    return p;
  }

 private:
  bool seen(VertexId x) const { return stamp_[x] == epoch_; }
  void see(VertexId x, std::uint32_t d) {
    stamp_[x] = epoch_;
    dist_[x] = d;
  }

  const LabeledMultigraph& g_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::uint32_t> dist_;
  std::uint64_t epoch_ = 0;
};

void load_rounds(MpcRun& run, const LabeledMultigraph& g,
                 const std::function<std::size_t(VertexId)>& owner) {
  run.load_records(input_records(g));
  run.primitive_sort(record_less);
  run.exec_round([&](MachineContext& ctx) {
    for (Words& r : ctx.storage()) {
      const std::size_t dest = owner(static_cast<VertexId>(r[0]));
      ctx.send(dest, std::move(r));
    }
    ctx.storage().clear();
  });
}

LocalOutput accounted_compression(MpcRun& run, const LabeledMultigraph& g,
                                  const LocalAlgorithm& a,
                                  const CompressionPlan& p, const Layout& l,
                                  const std::vector<BallProfile>& profiles,
                                  std::size_t spot_checks) {
  const std::size_t n = g.n();
  const std::size_t vpm = l.vertices_per_machine;
  auto owner = [vpm](VertexId v) { return static_cast<std::size_t>(v / vpm); };
  auto owned = [&](std::size_t machine) {
    const std::size_t lo = std::min(n, machine * vpm);
    return std::pair{lo, std::min(n, lo + vpm)};
  };

  auto guard = run.reconfigure(l.machines, l.capacity);
  load_rounds(run, g, owner);

  auto held_words = [&](std::size_t machine, std::uint32_t radius) {
    const auto [lo, hi] = owned(machine);
    std::size_t w = 0;
    for (std::size_t v = lo; v < hi; ++v) w += profiles[v].words[radius];
    return w;
  };

  std::uint32_t radius = 0;
  for (const auto& [r, rp] : p.schedule) {
    run.exec_round([&](MachineContext& ctx) {
      ctx.set_external_words(held_words(ctx.id(), r));
      const auto [lo, hi] = owned(ctx.id());
      for (std::size_t v = lo; v < hi; ++v) {
        std::size_t b = 0;
        const std::size_t e = profiles[v].layer(r + 1, &b);
        for (std::size_t i = b; i < e; ++i) {
          const VertexId w = profiles[v].order[i];
          ctx.send(owner(w), {v, w});
        }
      }
    });
    const std::uint32_t ext = rp;
    run.exec_round([&](MachineContext& ctx) {
      for (const Message& msg : ctx.inbox()) {
        const auto v = static_cast<VertexId>(msg.payload[0]);
        const auto w = static_cast<VertexId>(msg.payload[1]);
        ctx.send(owner(v), {v}, 1 + profiles[w].words[ext]);
      }
    });
    radius = r + rp + 1;
  }

  LocalOutput out = simulate_local_direct(g, a);
  run.exec_round([&](MachineContext& ctx) {
    const auto [lo, hi] = owned(ctx.id());
    std::size_t sim = 0, outputs = 0;
    for (std::size_t v = lo; v < hi; ++v) {
      std::size_t b = 0;
      const std::size_t simulated = profiles[v].layer(radius, &b);
      sim = std::max(sim, simulated * a.state_bound());
      outputs += out[v].size();
    }
    ctx.set_external_words(held_words(ctx.id(), radius) + sim + outputs);
  });

  for (std::size_t i = 0; i < spot_checks && n > 0; ++i) {
    const auto v = static_cast<VertexId>(uniform_below(
        hash_words(run.config().seed, {stream::kSpotCheck, i}), n));
    if (simulate_on_neighborhood(neighborhood(g, v, p.t), a) != out[v]) {
      throw ContractViolation("ball simulation of vertex " + std::to_string(v) +
                              " disagrees with the direct simulation");
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> CompressionPlan::radii() const {
  std::vector<std::uint32_t> out{0};
  for (const auto& [r, rp] : schedule) out.push_back(r + rp + 1);
  return out;
}

CompressionPlan plan(std::uint32_t t, std::size_t d, std::size_t l_V,
                     std::size_t l_E, std::size_t s_A) {
  if (d < 2) throw InputError("compression plan needs d >= 2");
  CompressionPlan p;
  p.t = t;
  p.degree = d;
  p.label_words = l_V;
  p.edge_label_words = l_E;
  p.state_words = s_A;
  std::uint32_t r = 0;
  while (r < t) {
    const std::uint32_t rp = std::min(r, t - r - 1);
    p.schedule.emplace_back(r, rp);
    r = r + rp + 1;
  }
  const long double per = static_cast<long double>(l_V) +
                          static_cast<long double>(d) * (1 + l_E) + s_A;
  const long double s =
      std::pow(static_cast<long double>(d), static_cast<long double>(t)) * per;
  p.s_star = s < kSaturatedWords ? static_cast<double>(s) : kSaturatedWords;
  return p;
}

const char* to_string(BallMode mode) {
  switch (mode) {
    case BallMode::automatic: return "automatic";
    case BallMode::materialized: return "materialized";
    case BallMode::accounted: return "accounted";
  }
  return "?";
}

RoundCompressor::RoundCompressor(MpcRun& run, const LabeledMultigraph& g,
                                 std::size_t vertices_per_machine,
                                 std::size_t capacity)
    : run_(run),
      g_(g),
      vertices_per_machine_(std::max<std::size_t>(1, vertices_per_machine)),
      layout_(run.reconfigure(machines_for(g.n(), vertices_per_machine_),
                              capacity)) {}

void RoundCompressor::load() {
  load_rounds(run_, g_, [this](VertexId v) { return owner(v); });
  pending_load_ = true;
  radius_ = 0;
}

std::vector<Neighborhood> RoundCompressor::current(
    const std::vector<Words>& storage, std::span<const Message> inbox) const {
  std::vector<Neighborhood> balls;
  if (pending_load_) {
    // Records arrive sorted by (vertex, kind), so vertex records open balls.
    for (const Message& msg : inbox) {
      const Words& r = msg.payload;
      if (r[1] == kVertexRecord) {
        Neighborhood nb;
        nb.center = static_cast<VertexId>(r[0]);
        nb.core.push_back({nb.center, VertexLabel{Words(r.begin() + 2, r.end())}});
        balls.push_back(std::move(nb));
      } else {
        if (balls.empty() || balls.back().center != r[0]) {
          throw ContractViolation("edge record before its vertex record");
        }
        balls.back().edges.push_back(
            {static_cast<VertexId>(r[2]), static_cast<VertexId>(r[3]),
             {r[4], r[5], r[6]}});
      }
    }
    for (Neighborhood& nb : balls) std::sort(nb.edges.begin(), nb.edges.end());
    return balls;
  }
  balls.reserve(storage.size());
  for (const Words& rec : storage) balls.push_back(Neighborhood::deserialize(rec));
  if (!pending_extension_) return balls;

  std::map<VertexId, std::vector<Neighborhood>> received;
  for (const Message& msg : inbox) {
    std::span<const Word> p(msg.payload);
    received[static_cast<VertexId>(p[0])].push_back(
        Neighborhood::deserialize(p.subspan(1)));
  }
  for (Neighborhood& nb : balls) {
    auto it = received.find(nb.center);
    const std::span<const Neighborhood> ext =
        it == received.end() ? std::span<const Neighborhood>{}
                             : std::span<const Neighborhood>(it->second);
    nb = combine_neighborhoods(nb, ext, *pending_extension_);
  }
  return balls;
}

std::vector<Neighborhood> RoundCompressor::balls() const {
  std::vector<Neighborhood> all;
  all.reserve(g_.n());
  for (const Machine& m : run_.machines()) {
    for (Neighborhood& nb : current(m.storage, m.inbox)) all.push_back(std::move(nb));
  }
  return all;
}

GatherTrace RoundCompressor::gather_step(std::uint32_t r_prime) {
  GatherTrace trace;
  trace.requests.resize(g_.n());
  trace.requested_machines.resize(g_.n());
  const std::uint32_t r = radius();
  if (r_prime > r) throw InputError("gather step: r' exceeds the current radius");

  run_.exec_round([&](MachineContext& ctx) {
    std::vector<Neighborhood> balls = current(ctx.storage(), ctx.inbox());
    ctx.storage().clear();
    for (const Neighborhood& nb : balls) {
      const VertexId v = nb.center;
      for (VertexId w : nb.frontier()) {
        ctx.send(owner(w), {v, w});
        trace.requests[v].push_back(w);
        trace.requested_machines[v].push_back(owner(w));
        ++trace.messages;
      }
      auto& ms = trace.requested_machines[v];
      std::sort(ms.begin(), ms.end());
      ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
      ctx.storage().push_back(nb.serialize());
    }
  });
  radius_ = r;
  pending_load_ = false;
  pending_extension_.reset();

  run_.exec_round([&](MachineContext& ctx) {
    const std::size_t lo = first_owned(ctx.id());
    std::unordered_map<VertexId, Words> cache;
    for (const Message& msg : ctx.inbox()) {
      const auto v = static_cast<VertexId>(msg.payload[0]);
      const auto w = static_cast<VertexId>(msg.payload[1]);
      auto it = cache.find(w);
      if (it == cache.end()) {
        const Words& rec = ctx.storage().at(w - lo);
        Neighborhood nb = Neighborhood::deserialize(rec);
        it = cache.emplace(w, restrict_radius(nb, r_prime).serialize()).first;
      }
      Words payload{v};
      payload.insert(payload.end(), it->second.begin(), it->second.end());
      ctx.send(owner(v), std::move(payload));
    }
  });
  pending_extension_ = r_prime;
  return trace;
}

LocalOutput RoundCompressor::finish(const LocalAlgorithm& a) {
  LocalOutput out(g_.n());
  run_.exec_round([&](MachineContext& ctx) {
    std::vector<Neighborhood> balls = current(ctx.storage(), ctx.inbox());
    ctx.storage().clear();
    std::size_t sim = 0, outputs = 0;
    for (const Neighborhood& nb : balls) {
      BallSimulation s = simulate_on_neighborhood_measured(nb, a);
      sim = std::max(sim, s.simulated_vertices * a.state_bound());
      outputs += s.output.size();
      out[nb.center] = std::move(s.output);
      ctx.storage().push_back(nb.serialize());
    }
    ctx.set_external_words(sim + outputs);
  });
  radius_ = radius();
  pending_load_ = false;
  pending_extension_.reset();
  return out;
}

LocalOutput direct_mpc_simulation(MpcRun& run, const LabeledMultigraph& g,
                                  const LocalAlgorithm& a,
                                  std::size_t message_words) {
  const std::size_t n = g.n();
  const std::size_t d = g.max_degree();
  const std::size_t est = a.state_bound() + g.label_words() + d * (1 + kEdgeLabelWords) +
                          d * (2 + message_words) + 2;
  const std::size_t S = run.config().S;
  const std::size_t capacity = std::max(S, 2 * est);
  const std::size_t vpm = std::max<std::size_t>(1, S / (2 * est));
  auto owner = [vpm](VertexId v) { return static_cast<std::size_t>(v / vpm); };
  auto guard = run.reconfigure(machines_for(n, vpm), capacity);
  load_rounds(run, g, owner);

  // Position of every edge in each endpoint's incidence list.
  std::vector<std::uint32_t> pos_u(g.m()), pos_v(g.m());
  std::vector<std::vector<IncidentEdge>> edges(n);
  for (VertexId v = 0; v < n; ++v) {
    auto inc = g.incident(v);
    for (std::uint32_t i = 0; i < inc.size(); ++i) {
      (g.edges()[inc[i]].u == v ? pos_u : pos_v)[inc[i]] = i;
      edges[v].push_back(g.incident_edge(v, inc[i]));
    }
  }
  auto peer = [&](VertexId v, std::uint32_t i) {
    const std::uint32_t ei = g.incident(v)[i];
    const LabeledEdge& e = g.edges()[ei];
    return e.u == v ? std::pair{e.v, pos_v[ei]} : std::pair{e.u, pos_u[ei]};
  };

  const std::uint32_t t = a.rounds();
  std::vector<Words> state(n);
  LocalOutput out(n);
  std::vector<std::vector<Words>> inbox(n);
  auto ctx_of = [&](VertexId v) { return VertexContext{v, g.label(v), edges[v]}; };
  auto emit = [&](MachineContext& ctx, VertexId v, std::uint32_t k) {
    std::vector<Words> msgs = a.send(ctx_of(v), state[v], k);
    if (msgs.size() != edges[v].size()) {
      throw ContractViolation("send() must return one message per incident edge");
    }
    for (std::uint32_t i = 0; i < msgs.size(); ++i) {
      const auto [w, j] = peer(v, i);
      Words payload{w, j};
      payload.insert(payload.end(), msgs[i].begin(), msgs[i].end());
      ctx.send(owner(w), std::move(payload));
    }
  };
  auto held = [&](std::size_t machine) {
    std::size_t words = 0;
    const std::size_t lo = std::min(n, machine * vpm), hi = std::min(n, lo + vpm);
    for (std::size_t v = lo; v < hi; ++v) {
      words += state[v].size() + g.label(v).words.size() +
               edges[v].size() * (1 + kEdgeLabelWords) + out[v].size();
    }
    return words;
  };

  for (std::uint32_t k = 0; k <= t; ++k) {
    run.exec_round([&](MachineContext& ctx) {
      const std::size_t lo = std::min(n, ctx.id() * vpm), hi = std::min(n, lo + vpm);
      if (k == 0) {
        ctx.storage().clear();
        for (std::size_t v = lo; v < hi; ++v) {
          state[v] = a.initial_state(ctx_of(static_cast<VertexId>(v)));
        }
      } else {
        for (std::size_t v = lo; v < hi; ++v) inbox[v].assign(edges[v].size(), Words{});
        for (const Message& msg : ctx.inbox()) {
          inbox[msg.payload[0]][msg.payload[1]] = Words(msg.payload.begin() + 2, msg.payload.end());
        }
        for (std::size_t v = lo; v < hi; ++v) {
          state[v] = a.receive(ctx_of(static_cast<VertexId>(v)), std::move(state[v]),
                               inbox[v], k);
          inbox[v].clear();
        }
      }
      for (std::size_t v = lo; v < hi; ++v) {
        if (state[v].size() > a.state_bound()) {
          throw ContractViolation("vertex " + std::to_string(v) + " exceeds s_A");
        }
        if (k < t) {
          emit(ctx, static_cast<VertexId>(v), k + 1);
        } else {
          out[v] = a.output(ctx_of(static_cast<VertexId>(v)), state[v]);
          if (out[v].size() > a.output_bound()) {
            throw ContractViolation("output of vertex " + std::to_string(v) +
                                    " exceeds l_out");
          }
        }
      }
      ctx.set_external_words(held(ctx.id()));
    });
  }
  return out;
}

std::vector<std::size_t> ball_words_by_radius(const LabeledMultigraph& g,
                                              VertexId v, std::uint32_t t) {
  if (v >= g.n()) throw InputError("vertex id out of range");
  ProfileBuilder builder(g);
  return builder.build(v, t).words;
}

LocalOutput round_compression(MpcRun& run, const LabeledMultigraph& g,
                              const LocalAlgorithm& a,
                              const CompressionOptions& options,
                              CompressionReport* report) {
  const std::size_t d = std::max<std::size_t>(2, g.degree_bound());
  const CompressionPlan p =
      plan(a.rounds(), d, g.label_words(), kEdgeLabelWords, a.state_bound());
  const Layout l = layout_for(run, g.n(), p, options.space_factor);

  BallMode mode = options.mode;
  std::vector<BallProfile> profiles;
  std::size_t total = 0;
  if (mode != BallMode::materialized) {
    ProfileBuilder builder(g);
    profiles.reserve(g.n());
    for (VertexId v = 0; v < g.n(); ++v) {
      profiles.push_back(builder.build(v, p.t));
      total += profiles.back().words.back();
    }
    if (mode == BallMode::automatic) {
      // Responses of one step are all in flight at once, one copy per request.
      std::size_t traffic = 0;
      for (const auto& [r, rp] : p.schedule) {
        std::size_t step = 0;
        for (const BallProfile& bp : profiles) {
          std::size_t b = 0;
          const std::size_t e = bp.layer(r + 1, &b);
          for (std::size_t i = b; i < e; ++i) step += 1 + profiles[bp.order[i]].words[rp];
        }
        traffic = std::max(traffic, step);
      }
      mode = total + traffic <= options.materialize_limit ? BallMode::materialized
                                                          : BallMode::accounted;
    }
  }

  const std::uint64_t rounds_before = run.stats().rounds_used;
  const std::size_t raises_before = run.stats().capacity_raises.size();
  run.begin_window();
  LocalOutput out;
  if (mode == BallMode::accounted) {
    out = accounted_compression(run, g, a, p, l, profiles, options.spot_checks);
  } else {
    RoundCompressor rc(run, g, l.vertices_per_machine, l.capacity);
    rc.load();
    for (const auto& step : p.schedule) rc.gather_step(step.second);
    out = rc.finish(a);
    if (profiles.empty()) {
      for (const Machine& m : run.machines()) {
        for (const Words& rec : m.storage) total += rec.size();
      }
    }
  }

  if (report != nullptr) {
    report->plan = p;
    report->mode = mode;
    report->rounds = run.stats().rounds_used - rounds_before;
    report->peak_machine_words = run.window_peak();
    report->capacity = l.capacity;
    report->vertices_per_machine = l.vertices_per_machine;
    report->machines = l.machines;
    report->total_ball_words = total;
    report->capacity_raised = run.stats().capacity_raises.size() > raises_before;
  }
  return out;
}

LocalOutput phased_round_compression(
    MpcRun& run, const LabeledMultigraph& g,
    std::span<const LocalAlgorithm* const> phases,
    const CompressionOptions& options, std::vector<CompressionReport>* reports) {
  if (phases.empty()) throw InputError("phased compression needs a phase");
  std::vector<LabeledEdge> edges(g.edges().begin(), g.edges().end());
  LabeledMultigraph current = g;
  LocalOutput out;
  for (std::size_t j = 0; j < phases.size(); ++j) {
    if (j > 0) {
      std::vector<VertexLabel> labels(g.n());
      for (VertexId v = 0; v < g.n(); ++v) labels[v].words = std::move(out[v]);
      current = LabeledMultigraph(g.n(), edges, std::move(labels), g.degree_bound());
    }
    CompressionReport rep;
    out = round_compression(run, current, *phases[j], options, &rep);
    if (reports != nullptr) reports->push_back(std::move(rep));
  }
  return out;
}

}  // namespace mpcsim
