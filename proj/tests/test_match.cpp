#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mpcsim/errors.hpp"
#include "mpcsim/harness.hpp"
#include "mpcsim/oracles.hpp"
#include "mpcsim/peeling.hpp"
#include "test_support.hpp"

using namespace mpcsim;
using testing::median;

namespace {

bool valid(const Graph& g, const std::vector<Edge>& m, const std::vector<VertexId>& c) {
  for (const Edge& e : m) {
    if (!std::binary_search(c.begin(), c.end(), e.u) ||
        !std::binary_search(c.begin(), c.end(), e.v)) {
      return false;
    }
  }
  return check_matching(g, m) && check_cover(g, c) && c.size() >= m.size();
}

PeelingOutput run_match(const Graph& g, const MatchMpcParams& p) {
  MpcRun run = make_run(g, p.delta, p.seed);
  return match_mpc(run, g, p);
}

Graph cliques(std::size_t n, std::size_t block, std::uint64_t seed = 0) {
  GeneratorSpec s;
  s.kind = GeneratorKind::cliques;
  s.n = n;
  s.block = block;
  s.seed = seed;
  return generate(s);
}

}  // namespace

TEST_CASE("parameters are validated") {
  const Graph g = testing::path_graph(4);
  MatchMpcParams p;
  p.k = 1;
  CHECK_THROWS_AS(run_match(g, p), InputError);
  p.k = 2;
  p.lambda = 1;
  CHECK_THROWS_AS(run_match(g, p), InputError);
  CHECK_THROWS_AS(boost(g, MatchMpcParams{}, 0), InputError);
  CHECK_THROWS_AS(two_plus_eps(g, MatchMpcParams{}, 1.0), InputError);
}

TEST_CASE("n = 16, lambda = 4: the guard fails and the run is the direct fallback") {
  MatchMpcParams p;
  p.lambda = 4;
  for (std::uint64_t s = 0; s < 10; ++s) {
    p.seed = s;
    const Graph g = testing::random_graph(16, 0.4, s);
    const PeelingOutput o = run_match(g, p);
    CHECK(o.iterations.empty());
    CHECK(o.fallback_bound == doctest::Approx(32));
    CHECK(valid(g, o.matching, o.cover));
  }
}

TEST_CASE("sampling: clamped probability keeps every edge in every phase") {
  const Graph g = testing::random_graph(30, 0.3, 2);
  const SampledMultigraph sm = build_sampled_multigraph(g, 10, 3, 32, 1000, 5);
  CHECK(sm.clamped);
  CHECK(sm.p == 1.0);
  CHECK(sm.graph.m() == 3 * g.m());
  for (VertexId v = 0; v < g.n(); ++v) {
    for (std::uint64_t i = 1; i <= 3; ++i) CHECK(sm.graph.degree(v, i) == g.degree(v));
  }
  for (const LabeledEdge& e : sm.graph.edges()) {
    CHECK(e.label.rho_u <= 1000);
    CHECK(e.label.rho_v <= 1000);
  }
}

TEST_CASE("sampling: empty residual gives an empty multigraph") {
  const SampledMultigraph sm = build_sampled_multigraph(Graph(50, {}), 1000, 2, 2, 10, 1);
  CHECK(sm.graph.m() == 0);
  CHECK(sm.graph.n() == 50);
}

TEST_CASE("sampling: per-phase degree of a degree-Delta vertex is binomial") {
  // n = 4096, Delta = n, k' = 3, lambda = 32: p = 8 * 32 * 12 / 4096.
  const std::size_t n = 4096;
  const Graph star = testing::star_graph(n - 1);
  const double p = 8.0 * 32 * 12 / n;
  double sum = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const SampledMultigraph sm = build_sampled_multigraph(star, n, 3, 32, default_rho_max(n), s);
    CHECK(sm.p == doctest::Approx(p));
    CHECK_FALSE(sm.clamped);
    for (std::uint64_t i = 1; i <= 3; ++i) sum += sm.graph.degree(0, i);
  }
  const double trials = seeds * 3.0;
  const double mean = sum / trials;
  const double expect = (n - 1) * p;
  const double sigma = std::sqrt((n - 1) * p * (1 - p) / trials);
  CHECK(std::abs(mean - expect) <= 3 * sigma);
}

TEST_CASE("colors carry one bit per phase") {
  const SampledMultigraph sm = build_sampled_multigraph(testing::path_graph(64), 100, 3, 2, 10, 4);
  Word seen = 0;
  for (VertexId v = 0; v < 64; ++v) {
    REQUIRE(sm.graph.label(v).words.size() == 1);
    CHECK(sm.graph.label(v).words[0] < 8);
    seen |= sm.graph.label(v).words[0];
  }
  CHECK(seen == 7);
}

TEST_CASE("outputs are valid on every seed across generators") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    GeneratorSpec spec;
    spec.kind = static_cast<GeneratorKind>(s % 9);
    spec.n = 64 + 8 * s;
    spec.p = 0.08;
    spec.alpha = 3;
    spec.block = 12;
    spec.seed = s;
    const Graph g = generate(spec);
    MatchMpcParams p;
    p.seed = s;
    p.k = 2 + 2 * (s % 3);
    p.lambda = 2;
    const PeelingOutput o = run_match(g, p);
    CHECK(valid(g, o.matching, o.cover));
  }
}

TEST_CASE("compressed iterations run on dense graphs and keep the invariants") {
  MatchMpcParams p;
  p.lambda = 2;
  p.k = 4;
  p.seed = 9;
  const Graph g = cliques(1024, 60);
  const PeelingOutput o = run_match(g, p);
  REQUIRE_FALSE(o.iterations.empty());
  CHECK(valid(g, o.matching, o.cover));
  for (const MatchIteration& it : o.iterations) {
    CHECK(it.k_prime >= 1);
    CHECK(it.k_prime <= 4);
    CHECK(it.compression.rounds > 0);
    CHECK(static_cast<double>(it.sampled_max_degree) <= it.sampled_degree_bound);
  }
}

TEST_CASE("perfect matching graph: median matching at least n/8") {
  const std::size_t n = 64;
  GeneratorSpec spec;
  spec.kind = GeneratorKind::disjoint_matching;
  spec.n = n;
  const Graph g = generate(spec);
  std::vector<double> sizes;
  for (std::uint64_t s = 0; s < 50; ++s) {
    MatchMpcParams p;
    p.seed = s;
    sizes.push_back(static_cast<double>(run_match(g, p).matching.size()));
  }
  CHECK(median(sizes) >= n / 8.0);
}

TEST_CASE("boost: one trial is the plain matcher, empty graphs stay empty") {
  const Graph g = testing::random_graph(60, 0.1, 3);
  MatchMpcParams p;
  p.seed = 12;
  const PeelingOutput a = boost(g, p, 1);
  const PeelingOutput b = run_match(g, p);
  CHECK(a.matching == b.matching);
  CHECK(a.cover == b.cover);
  const PeelingOutput e = boost(Graph(7, {}), p, 5);
  CHECK(e.matching.empty());
  CHECK(e.cover.empty());
}

TEST_CASE("boost: 16 trials do at least as well as one in median") {
  std::vector<double> one, many;
  std::vector<double> cover_one, cover_many;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = testing::random_graph(200, 0.05, 1000 + s);
    MatchMpcParams p;
    p.seed = s;
    one.push_back(static_cast<double>(boost(g, p, 1).matching.size()));
    many.push_back(static_cast<double>(boost(g, p, 16).matching.size()));
    cover_one.push_back(static_cast<double>(boost(g, p, 1, BoostGoal::cover).cover.size()));
    cover_many.push_back(static_cast<double>(boost(g, p, 16, BoostGoal::cover).cover.size()));
  }
  CHECK(median(many) >= median(one));
  CHECK(median(cover_many) <= median(cover_one));
}

TEST_CASE("(2+eps): repetition count and early stop") {
  CHECK(two_plus_eps_repetitions(0.5) == 3);
  CHECK(two_plus_eps_repetitions(0.2) == 7);
  // A single edge is gone after the first repetition that matches it.
  const Graph g(2, {{0, 1}});
  const TwoPlusEpsResult r = two_plus_eps(g, MatchMpcParams{}, 0.01);
  CHECK(r.repetitions < two_plus_eps_repetitions(0.01));
  CHECK(r.matching.size() == 1);
}

TEST_CASE("(2+eps) on P3: at most one edge, found unless every repetition misses") {
  // One run matches P3 only if the center is blue and its friend red, so
  // each of the 7 repetitions misses with probability 3/4.
  const Graph g = testing::path_graph(3);
  const int seeds = 400;
  int found = 0;
  for (int s = 0; s < seeds; ++s) {
    MatchMpcParams p;
    p.seed = static_cast<std::uint64_t>(s);
    const TwoPlusEpsResult r = two_plus_eps(g, p, 0.2);
    CHECK(r.matching.size() <= 1);
    CHECK(valid(g, r.matching, r.cover));
    found += r.matching.size() == 1 ? 1 : 0;
  }
  const double miss = std::pow(0.75, 7);
  const double sigma = std::sqrt(miss * (1 - miss) / seeds);
  CHECK(std::abs((1.0 - static_cast<double>(found) / seeds) - miss) <= 4 * sigma);
}

TEST_CASE("(2+eps) on G(22, 0.2): median optimum / returned <= 2.2") {
  std::vector<double> ratios;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Graph g = testing::random_graph(22, 0.2, 500 + s);
    if (g.m() == 0) continue;
    MatchMpcParams p;
    p.seed = s;
    const TwoPlusEpsResult r = two_plus_eps(g, p, 0.2);
    CHECK(valid(g, r.matching, r.cover));
    ratios.push_back(static_cast<double>(max_matching_exact(g).size) /
                     static_cast<double>(r.matching.size()));
  }
  CHECK(median(ratios) <= 2.2);
}

TEST_CASE("matching runs are deterministic") {
  const Graph g = cliques(600, 40);
  MatchMpcParams p;
  p.lambda = 2;
  p.seed = 77;
  MpcRun r1 = make_run(g, 0.5, 77), r2 = make_run(g, 0.5, 77);
  const PeelingOutput a = match_mpc(r1, g, p);
  const PeelingOutput b = match_mpc(r2, g, p);
  CHECK(a.matching == b.matching);
  CHECK(a.cover == b.cover);
  CHECK(r1.stats() == r2.stats());
}
