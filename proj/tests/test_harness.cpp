#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mpcsim/errors.hpp"
#include "mpcsim/harness.hpp"
#include "mpcsim/oracles.hpp"

using namespace mpcsim;

namespace {

Graph gen(GeneratorKind kind, std::size_t n, std::uint64_t seed = 0) {
  GeneratorSpec s;
  s.kind = kind;
  s.n = n;
  s.seed = seed;
  return generate(s);
}

std::string csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool same_edges(const Graph& a, const Graph& b) {
  return a.n() == b.n() && std::vector<Edge>(a.edges().begin(), a.edges().end()) ==
                               std::vector<Edge>(b.edges().begin(), b.edges().end());
}

}  // namespace

TEST_CASE("generator names round-trip") {
  for (int k = 0; k <= static_cast<int>(GeneratorKind::cliques); ++k) {
    const auto kind = static_cast<GeneratorKind>(k);
    CHECK(parse_generator_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_generator_kind("hypercube"), InputError);
  for (Algorithm a : {Algorithm::match, Algorithm::mis, Algorithm::peel_direct,
                      Algorithm::compress_demo}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK(parse_algorithm("peel-direct") == Algorithm::peel_direct);
  CHECK_THROWS_AS(parse_algorithm("sort"), InputError);
}

TEST_CASE("generator examples") {
  CHECK(gen(GeneratorKind::gnp, 0).n() == 0);
  CHECK(gen(GeneratorKind::gnp, 0).m() == 0);
  const Graph dm = gen(GeneratorKind::disjoint_matching, 10);
  CHECK(dm.m() == 5);
  CHECK(dm.max_degree() == 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::forest_union;
    spec.n = 256;
    spec.alpha = 3;
    spec.seed = s;
    CHECK(degeneracy(generate(spec)) <= 5);
  }
}

TEST_CASE("generator shapes") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph t = gen(GeneratorKind::tree, 300, s);
    CHECK(t.m() == 299);
    CHECK(degeneracy(t) == 1);
  }
  CHECK(gen(GeneratorKind::tree, 1).m() == 0);
  CHECK(gen(GeneratorKind::tree, 2).m() == 1);
  const Graph grid = gen(GeneratorKind::grid, 100);
  CHECK(grid.m() == 2 * 10 * 9);
  CHECK(grid.max_degree() == 4);
  const Graph star = gen(GeneratorKind::star, 50);
  CHECK(star.m() == 49);
  CHECK(star.degree(0) == 49);
  CHECK(gen(GeneratorKind::cycle, 30).m() == 30);
  CHECK(gen(GeneratorKind::path, 30).m() == 29);
  GeneratorSpec c;
  c.kind = GeneratorKind::cliques;
  c.n = 20;
  c.block = 8;
  const Graph cl = generate(c);
  CHECK(cl.m() == 28 + 28 + 6);  // blocks of 8, 8 and 4
  CHECK(cl.max_degree() == 7);
  // G(n, p) edge count within 4 sigma of its mean.
  GeneratorSpec g;
  g.kind = GeneratorKind::gnp;
  g.n = 400;
  g.p = 0.05;
  g.seed = 3;
  const double pairs = 400.0 * 399 / 2;
  const double mean = pairs * 0.05, sigma = std::sqrt(pairs * 0.05 * 0.95);
  CHECK(std::abs(static_cast<double>(generate(g).m()) - mean) <= 4 * sigma);
}

TEST_CASE("generators are deterministic per seed") {
  for (int k = 0; k <= static_cast<int>(GeneratorKind::cliques); ++k) {
    GeneratorSpec s;
    s.kind = static_cast<GeneratorKind>(k);
    s.n = 120;
    s.p = 0.1;
    s.seed = 42;
    CHECK(same_edges(generate(s), generate(s)));
  }
  CHECK_FALSE(same_edges(gen(GeneratorKind::tree, 100, 1), gen(GeneratorKind::tree, 100, 2)));
}

TEST_CASE("generators reject invalid parameters") {
  GeneratorSpec s;
  s.n = 10;
  s.p = 1.5;
  CHECK_THROWS_AS(generate(s), InputError);
  s.kind = GeneratorKind::forest_union;
  s.alpha = 0;
  CHECK_THROWS_AS(generate(s), InputError);
  s.kind = GeneratorKind::cliques;
  s.block = 0;
  CHECK_THROWS_AS(generate(s), InputError);
}

TEST_CASE("sweep: 2 points x 3 seeds gives 6 rows in spec order, reproducibly") {
  ExperimentSpec spec;
  spec.algorithm = Algorithm::match;
  spec.generator = GeneratorSpec{GeneratorKind::gnp, 18, 0.25};
  spec.k = {2, 4};
  spec.seeds = {1, 2, 3};
  const auto rows = run_experiment(spec);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(rows[i].k == (i < 3 ? 2u : 4u));
    CHECK(rows[i].seed == 1 + i % 3);
    CHECK(rows[i].valid);
    CHECK(rows[i].error.empty());
    CHECK(rows[i].oracle_matching.has_value());
    CHECK(rows[i].oracle_cover.has_value());
    CHECK(*rows[i].matching_size <= *rows[i].oracle_matching);
    CHECK(*rows[i].cover_size >= *rows[i].oracle_cover);
    CHECK_FALSE(rows[i].wall_ms.has_value());
  }
  const std::string a = csv(rows);
  CHECK(lines(a).size() == 7);
  CHECK(lines(a)[0] ==
        "n,m,k,lambda,gamma,delta,seed,rounds,max_machine_words,total_words,"
        "matching_size,cover_size,mis_size,oracle_matching,oracle_cover,valid,wall_ms,eps,"
        "error");
  CHECK(csv(run_experiment(spec)) == a);
  spec.threads = 4;
  CHECK(csv(run_experiment(spec)) == a);
}

TEST_CASE("sweep: oracle cells are empty beyond the budget") {
  ExperimentSpec spec;
  spec.generator = GeneratorSpec{GeneratorKind::gnp, 30, 0.1};
  const auto rows = run_experiment(spec);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].oracle_matching.has_value());
  CHECK(rows[0].oracle_cover.has_value());
  spec.generator->n = 41;
  const auto big = run_experiment(spec);
  CHECK_FALSE(big[0].oracle_cover.has_value());
  const auto cells = lines(csv(big))[1];
  CHECK(cells.find(",,,") != std::string::npos);  // mis, oracle_matching, oracle_cover
}

TEST_CASE("sweep: every algorithm yields valid rows") {
  for (Algorithm a : {Algorithm::match, Algorithm::mis, Algorithm::peel_direct,
                      Algorithm::compress_demo}) {
    ExperimentSpec spec;
    spec.algorithm = a;
    spec.generator = GeneratorSpec{GeneratorKind::tree, 64};
    spec.alpha = 1;
    spec.seeds = {5, 6};
    for (const ExperimentRow& r : run_experiment(spec)) {
      CHECK(r.valid);
      CHECK(r.error.empty());
      CHECK(r.rounds > 0);
      CHECK(r.n == 64);
      CHECK(r.m == 63);
    }
  }
  ExperimentSpec eps;
  eps.generator = GeneratorSpec{GeneratorKind::gnp, 20, 0.2};
  eps.eps = {0.5, 0.2};
  const auto rows = run_experiment(eps);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].eps == 0.5);
  CHECK(rows[1].eps == 0.2);
  CHECK(rows[1].valid);
}

TEST_CASE("sweep: failing rows record the error and the sweep continues") {
  ExperimentSpec spec;
  spec.generator = GeneratorSpec{GeneratorKind::path, 40};
  spec.k = {1, 2};  // k = 1 is rejected by the matcher
  const auto rows = run_experiment(spec);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].valid);
  CHECK(rows[0].error.find("k must be at least 2") != std::string::npos);
  CHECK(rows[1].valid);
  CHECK(rows[1].error.empty());
  CHECK(lines(csv(rows))[1].ends_with("k must be at least 2"));
}

TEST_CASE("sweep: input file and input errors") {
  ExperimentSpec none;
  CHECK_THROWS_AS(run_experiment(none), InputError);
  ExperimentSpec no_seeds;
  no_seeds.generator = GeneratorSpec{};
  no_seeds.seeds.clear();
  CHECK_THROWS_AS(run_experiment(no_seeds), InputError);

  const std::string path = "test_harness_graph.txt";
  {
    std::ofstream out(path);
    write_graph(out, gen(GeneratorKind::cycle, 12));
  }
  ExperimentSpec file;
  file.input_file = path;
  file.seeds = {1, 2};
  const auto rows = run_experiment(file);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 12);
  CHECK(rows[0].m == 12);
  CHECK(rows[0].oracle_matching == 6u);
  CHECK(rows[0].valid);
  std::remove(path.c_str());

  file.input_file = "does_not_exist.txt";
  const auto missing = run_experiment(file);
  CHECK(missing[0].error.find("cannot open") != std::string::npos);
}

TEST_CASE("json shapes") {
  ExperimentSpec spec;
  spec.generator = GeneratorSpec{GeneratorKind::gnp, 16, 0.3};
  spec.timing = true;
  const auto rows = run_experiment(spec);
  const nlohmann::json j = to_json(rows[0]);
  for (const char* key : {"n", "m", "k", "lambda", "gamma", "delta", "seed", "rounds",
                          "max_machine_words", "total_words", "matching_size", "cover_size",
                          "mis_size", "oracle_matching", "oracle_cover", "valid", "wall_ms",
                          "eps", "error"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["mis_size"].is_null());
  CHECK(j["wall_ms"].is_number());

  const Graph g = gen(GeneratorKind::gnp, 40, 3);
  MatchMpcParams p;
  MpcRun run = make_run(g, 0.5, 1);
  const nlohmann::json m = match_json(match_mpc(run, g, p));
  for (const char* key : {"matching", "cover", "rounds", "max_machine_words", "total_words",
                          "phase_trace_summary"}) {
    CHECK(m.contains(key));
  }
  const nlohmann::json s = stats_json(run.stats());
  CHECK(s["primitives"].contains("sort"));
  CHECK(s["primitives"].contains("prefix_sum"));

  MpcRun run2 = make_run(g, 0.5, 1);
  const nlohmann::json x = mis_json(arboricity_mis(run2, g, ArbMisParams{}));
  for (const char* key : {"mis", "outer_iterations", "rounds", "max_machine_words",
                          "total_words", "fallback_passes"}) {
    CHECK(x.contains(key));
  }
}
