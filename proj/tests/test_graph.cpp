#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mpcsim/errors.hpp"
#include "mpcsim/graph.hpp"
#include "mpcsim/mpc.hpp"
#include "test_support.hpp"

using namespace mpcsim;

TEST_CASE("graph stores canonical sorted edges and CSR neighbors") {
  const Graph g(4, {{2, 1}, {0, 3}, {1, 0}});
  CHECK(g.n() == 4);
  CHECK(g.m() == 3);
  REQUIRE(g.edges().size() == 3);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{0, 3});
  CHECK(g.edges()[2] == Edge{1, 2});
  const auto nb = g.neighbors(0);
  CHECK(std::vector<VertexId>(nb.begin(), nb.end()) == std::vector<VertexId>{1, 3});
  CHECK(g.degree(1) == 2);
  CHECK(g.max_degree() == 2);
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(2, 3));
}

TEST_CASE("graph rejects malformed input") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
}

TEST_CASE("induced subgraph keeps the vertex set") {
  const Graph g = testing::cycle_graph(5);
  std::vector<bool> keep{true, true, false, true, true};
  const Graph h = g.induced(keep);
  CHECK(h.n() == 5);
  CHECK(h.m() == 3);
  CHECK_FALSE(h.has_edge(1, 2));
  CHECK(h.has_edge(3, 4));
}

TEST_CASE("text format round trips") {
  const Graph g = testing::petersen();
  std::stringstream s;
  write_graph(s, g);
  CHECK(read_graph(s) == g);
}

TEST_CASE("text format errors are input errors") {
  std::stringstream truncated("3 2\n0 1\n");
  CHECK_THROWS_AS(read_graph(truncated), InputError);
  std::stringstream range("3 1\n0 5\n");
  CHECK_THROWS_AS(read_graph(range), InputError);
  std::stringstream header("x");
  CHECK_THROWS_AS(read_graph(header), InputError);
}

TEST_CASE("labeled edges canonicalize with their endpoint draws") {
  const LabeledEdge e{5, 2, {1, 10, 20}};
  const LabeledEdge c = e.canonical();
  CHECK(c.u == 2);
  CHECK(c.v == 5);
  CHECK(c.label.rho_u == 20);
  CHECK(c.label.rho_v == 10);
}

TEST_CASE("labeled multigraph incidence, phase degrees and bounds") {
  const LabeledMultigraph g(3, {{0, 1, {1, 5, 6}}, {0, 1, {2, 7, 8}}, {1, 2, {1, 9, 3}}},
                            {VertexLabel{{1}}, VertexLabel{{2, 3}}, VertexLabel{}});
  CHECK(g.degree(1) == 3);
  CHECK(g.degree(1, 1) == 2);
  CHECK(g.degree(0, 2) == 1);
  CHECK(g.max_degree() == 3);
  CHECK(g.label_words() == 2);
  // Seen from vertex 1, the edge to 0 carries 1's own draw first.
  const auto inc = g.incident(1);
  const IncidentEdge first = g.incident_edge(1, inc[0]);
  CHECK(first.neighbor == 0);
  CHECK(first.own_rho == 6);
  CHECK(first.other_rho == 5);
  CHECK_THROWS_AS(LabeledMultigraph(2, {{0, 1, {1, 1, 1}}, {0, 1, {1, 1, 1}}}), InputError);
  CHECK_THROWS_AS(LabeledMultigraph(2, {{0, 1, {}}, {0, 1, {1, 0, 0}}}, {}, 1), InputError);
  CHECK_THROWS_AS(LabeledMultigraph(2, {{0, 0, {}}}), InputError);
}

TEST_CASE("pack and unpack edges") {
  const Word w = pack_edge(7, 123456);
  CHECK(unpack_edge(w) == Edge{7, 123456});
}
