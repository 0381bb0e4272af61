#include <algorithm>
#include <cmath>
#include <string>

#include "mpcsim/edge_store.hpp"
#include "mpcsim/errors.hpp"
#include "mpcsim/random.hpp"
#include "peeling_internal.hpp"

namespace mpcsim {

namespace {

struct SampleParams {
  double p = 1;
  std::uint32_t k_prime = 1;
  std::uint64_t rho_max = 0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 1;
};

void sample_edge(const SampleParams& sp, Edge e, std::vector<LabeledEdge>& out) {
  for (std::uint64_t i = 1; i <= sp.k_prime; ++i) {
    if (sp.p < 1.0) {
      const std::uint64_t h =
          hash_words(sp.seed, {stream::kSample, sp.iteration, i, e.u, e.v});
      if (!(unit_interval(h) < sp.p)) continue;
    }
    const std::uint64_t ru = uniform_below(
        hash_words(sp.seed, {stream::kRho, sp.iteration, i, e.u, e.v, 0}), sp.rho_max + 1);
    const std::uint64_t rv = uniform_below(
        hash_words(sp.seed, {stream::kRho, sp.iteration, i, e.u, e.v, 1}), sp.rho_max + 1);
    out.push_back({e.u, e.v, {i, ru, rv}});
  }
}

std::vector<VertexLabel> color_labels(std::size_t n, std::uint32_t k_prime,
                                      std::uint64_t seed, std::uint64_t iteration) {
  const Word mask = k_prime >= 64 ? ~Word{0} : (Word{1} << k_prime) - 1;
  std::vector<VertexLabel> labels(n);
  for (VertexId v = 0; v < n; ++v) {
    labels[v].words = {hash_words(seed, {stream::kColor, iteration, v}) & mask};
  }
  return labels;
}

double sampling_probability(double Delta, std::uint32_t k_prime, std::uint32_t lambda,
                            double log_n) {
  return std::ldexp(static_cast<double>(lambda) * log_n, static_cast<int>(k_prime)) / Delta;
}

}  // namespace

std::uint64_t default_rho_max(std::size_t n) {
  const std::uint64_t m = std::max<std::uint64_t>(1, n);
  return 1000 * m * m * m;
}

SampledMultigraph build_sampled_multigraph(const Graph& residual, double Delta,
                                           std::uint32_t k_prime, std::uint32_t lambda,
                                           std::uint64_t rho_max, std::uint64_t seed,
                                           std::uint64_t iteration) {
  if (k_prime < 1) throw InputError("k' must be at least 1");
  if (!(Delta > 0)) throw InputError("Delta must be positive");
  const std::size_t n = residual.n();
  const double log_n = n > 1 ? std::log2(static_cast<double>(n)) : 1.0;
  const double raw = sampling_probability(Delta, k_prime, lambda, log_n);
  SampleParams sp{std::min(1.0, raw), k_prime, rho_max, seed, iteration};
  std::vector<LabeledEdge> edges;
  for (const Edge& e : residual.edges()) sample_edge(sp, e, edges);
  SampledMultigraph out;
  out.graph = LabeledMultigraph(n, std::move(edges), color_labels(n, k_prime, seed, iteration));
  out.p = sp.p;
  out.clamped = raw > 1.0;
  return out;
}

PeelingOutput match_mpc(MpcRun& run, const Graph& g, const MatchMpcParams& params) {
  if (params.k < 2) throw InputError("k must be at least 2");
  if (params.lambda < 2) throw InputError("lambda must be at least 2");
  const std::size_t n = g.n();
  const std::uint64_t rho_max = params.rho_max != 0 ? params.rho_max : default_rho_max(n);
  PeelingOutput out;
  double Delta = static_cast<double>(n);
  const double log_n = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
  const double guard = static_cast<double>(params.lambda) * params.lambda * log_n;

  std::uint64_t iteration = 0;
  while (n > 1 && Delta > guard) {
    ++iteration;
    MatchIteration it;
    it.delta = Delta;
    const double steps = std::ceil(std::log2(Delta / guard));
    it.k_prime = static_cast<std::uint32_t>(
        std::min<double>(params.k, std::max(1.0, steps)));
    const double raw = sampling_probability(Delta, it.k_prime, params.lambda, log_n);
    it.p = std::min(1.0, raw);
    it.p_clamped = raw > 1.0;
    it.sampled_degree_bound =
        4.0 * it.k_prime * std::ldexp(params.lambda * log_n, static_cast<int>(it.k_prime));

    // One local round: every machine samples its own edges.
    const SampleParams sp{it.p, it.k_prime, rho_max, params.seed, iteration};
    std::vector<LabeledEdge> sampled;
    run.exec_round([&](MachineContext& ctx) {
      for (const Words& r : ctx.storage()) {
        if (edge_store::is_edge(r)) sample_edge(sp, unpack_edge(r[0]), sampled);
      }
    });
    std::sort(sampled.begin(), sampled.end());
    const LabeledMultigraph gp(n, std::move(sampled),
                               color_labels(n, it.k_prime, params.seed, iteration));
    it.sampled_max_degree = gp.max_degree();

    const LocalPeeling lp(it.k_prime, params.lambda, log_n);
    const LocalOutput lo = round_compression(run, gp, lp, params.compression, &it.compression);
    LocalPeelingResult res = decode_local_peeling(lo, it.k_prime, Delta);

    const std::size_t machines = run.machine_count();
    edge_store::expand(run, [&](std::size_t machine) {
      return edge_store::remove_chunk(res.cover, machine, machines);
    });
    edge_store::remove_marked(run);

    out.matching.insert(out.matching.end(), res.matching.begin(), res.matching.end());
    out.cover.insert(out.cover.end(), res.cover.begin(), res.cover.end());
    for (PhaseTrace& ph : res.phases) out.phases.push_back(std::move(ph));

    Delta = std::ldexp(Delta, -static_cast<int>(it.k_prime));
    it.delta_after = Delta;
    it.residual_max_degree_after = edge_store::residual_graph(run, n).max_degree();
    out.iterations.push_back(std::move(it));
  }

  out.fallback_bound = 2 * Delta;
  out.fallback_bound_held =
      static_cast<double>(edge_store::residual_graph(run, n).max_degree()) <= out.fallback_bound;
  detail::peel_stored(run, out.fallback_bound,
                      hash_words(params.seed, {stream::kFallback}), out);
  detail::finalize(out, &run);
  return out;
}

MpcRun make_run(const Graph& g, double delta, std::uint64_t seed,
                std::uint64_t primitive_round_cost) {
  return MpcRun::init_run(g, MpcConfig::for_graph(g, delta, seed, primitive_round_cost));
}

PeelingOutput boost(const Graph& g, const MatchMpcParams& params, std::size_t trials,
                    BoostGoal goal) {
  if (trials == 0) throw InputError("boost needs at least one trial");
  PeelingOutput best;
  for (std::size_t j = 0; j < trials; ++j) {
    MatchMpcParams p = params;
    p.seed = trials == 1 ? params.seed : hash_words(params.seed, {stream::kTrial, j});
    MpcRun run = make_run(g, p.delta, p.seed, p.primitive_round_cost);
    PeelingOutput o = match_mpc(run, g, p);
    const bool better = j == 0 || (goal == BoostGoal::matching
                                       ? o.matching.size() > best.matching.size()
                                       : o.cover.size() < best.cover.size());
    if (better) best = std::move(o);
  }
  return best;
}

std::size_t two_plus_eps_repetitions(double eps) {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  return static_cast<std::size_t>(std::ceil(3.0 * std::log2(1.0 / eps)));
}

TwoPlusEpsResult two_plus_eps(const Graph& g, const MatchMpcParams& params, double eps) {
  const std::size_t reps = two_plus_eps_repetitions(eps);
  TwoPlusEpsResult res;
  std::vector<bool> keep(g.n(), true);
  Graph residual = g;
  for (std::size_t j = 0; j < reps && residual.m() > 0; ++j) {
    MatchMpcParams p = params;
    p.seed = hash_words(params.seed, {stream::kRepeat, j});
    MpcRun run = make_run(residual, p.delta, p.seed, p.primitive_round_cost);
    const PeelingOutput o = match_mpc(run, residual, p);
    res.rounds += o.rounds;
    res.max_machine_words = std::max(res.max_machine_words, o.max_machine_words);
    res.total_words = std::max(res.total_words, o.total_words);
    ++res.repetitions;
    for (const Edge& e : o.matching) {
      res.matching.push_back(e);
      keep[e.u] = keep[e.v] = false;
    }
    residual = g.induced(keep);
  }
  for (const Edge& e : res.matching) {
    res.cover.push_back(e.u);
    res.cover.push_back(e.v);
  }
  if (residual.m() > 0) {
    MatchMpcParams p = params;
    p.seed = hash_words(params.seed, {stream::kRepeat, reps});
    MpcRun run = make_run(residual, p.delta, p.seed, p.primitive_round_cost);
    const PeelingOutput o = match_mpc(run, residual, p);
    res.rounds += o.rounds;
    res.max_machine_words = std::max(res.max_machine_words, o.max_machine_words);
    res.total_words = std::max(res.total_words, o.total_words);
    res.cover.insert(res.cover.end(), o.cover.begin(), o.cover.end());
  }
  std::sort(res.matching.begin(), res.matching.end());
  std::sort(res.cover.begin(), res.cover.end());
  res.cover.erase(std::unique(res.cover.begin(), res.cover.end()), res.cover.end());
  return res;
}

std::vector<Edge> two_plus_eps_matching(const Graph& g, const MatchMpcParams& params,
                                        double eps) {
  return two_plus_eps(g, params, eps).matching;
}

std::vector<VertexId> two_plus_eps_cover(const Graph& g, const MatchMpcParams& params,
                                         double eps) {
  return two_plus_eps(g, params, eps).cover;
}

}  // namespace mpcsim
