#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpcsim/errors.hpp"
#include "mpcsim/local.hpp"
#include "mpcsim/mis.hpp"
#include "mpcsim/peeling.hpp"
#include "test_support.hpp"

using namespace mpcsim;
using testing::HashChain;
using testing::MaxIdWithin;

namespace {

class Greedy final : public LocalAlgorithm {
 public:
  std::uint32_t rounds() const override { return 1; }
  std::size_t state_bound() const override { return 1; }
  std::size_t output_bound() const override { return 1; }
  Words initial_state(const VertexContext&) const override { return {0}; }
  std::vector<Words> send(const VertexContext& v, const Words&, std::uint32_t) const override {
    return std::vector<Words>(v.edges.size(), Words{1});
  }
  Words receive(const VertexContext&, Words s, std::span<const Words> inbox,
                std::uint32_t) const override {
    // Grows its state by one word per message: breaks the declared bound.
    for (const Words& m : inbox) s.push_back(m[0]);
    return s;
  }
  Words output(const VertexContext&, const Words& s) const override { return s; }
};

// Vertex 0 on two graphs that differ only beyond distance t.
LabeledMultigraph path_with_tail(std::size_t n) {
  return LabeledMultigraph::from_graph(testing::path_graph(n));
}

}  // namespace

TEST_CASE("identity algorithm outputs own id") {
  const auto g = LabeledMultigraph::from_graph(testing::petersen());
  const LocalOutput out = simulate_local_direct(g, MaxIdWithin(0));
  for (VertexId v = 0; v < 10; ++v) CHECK(out[v] == Words{v});
}

TEST_CASE("max id within distance 2 on C6") {
  const auto g = LabeledMultigraph::from_graph(testing::cycle_graph(6));
  const LocalOutput out = simulate_local_direct(g, MaxIdWithin(2));
  // Vertex 0 sees {4, 5, 0, 1, 2}.
  CHECK(out[0] == Words{5});
  CHECK(out[3] == Words{5});
  CHECK(out[2] == Words{4});
}

TEST_CASE("simulation on a ball equals direct simulation") {
  const LabeledMultigraph g = testing::random_labeled(70, 4, 2, 17);
  for (std::uint32_t t : {0u, 1u, 2u, 3u}) {
    const HashChain a(t);
    const LocalOutput direct = simulate_local_direct(g, a);
    for (VertexId v = 0; v < g.n(); ++v) {
      CHECK(simulate_on_neighborhood(neighborhood(g, v, t), a) == direct[v]);
    }
  }
}

TEST_CASE("ball simulation matches on an interior path vertex and rejects short radii") {
  const auto g = path_with_tail(9);
  const LocalOutput direct = simulate_local_direct(g, MaxIdWithin(2));
  CHECK(simulate_on_neighborhood(neighborhood(g, 4, 2), MaxIdWithin(2)) == direct[4]);
  CHECK(simulate_on_neighborhood(neighborhood(g, 4, 5), MaxIdWithin(2)) == direct[4]);
  CHECK_THROWS_AS(simulate_on_neighborhood(neighborhood(g, 4, 1), MaxIdWithin(2)), InputError);
}

TEST_CASE("radius zero ball with a t = 0 algorithm outputs the label") {
  const LabeledMultigraph g(2, {{0, 1, {}}}, {VertexLabel{{42, 7}}, VertexLabel{{1}}});
  CHECK(simulate_on_neighborhood(neighborhood(g, 0, 0), testing::OwnLabel()) == Words{42, 7});
}

TEST_CASE("isolated center outputs the isolated-vertex value") {
  const LabeledMultigraph g(3, {{1, 2, {}}});
  CHECK(simulate_on_neighborhood(neighborhood(g, 0, 3), MaxIdWithin(3)) == Words{0});
}

TEST_CASE("exceeding the declared state bound is a contract violation") {
  const auto g = LabeledMultigraph::from_graph(testing::star_graph(3));
  CHECK_THROWS_AS(simulate_local_direct(g, Greedy()), ContractViolation);
}

TEST_CASE("max id within t on a path is the id t steps ahead") {
  const std::size_t n = 12;
  const auto g = LabeledMultigraph::from_graph(testing::path_graph(n));
  const LocalOutput out = simulate_local_direct(g, MaxIdWithin(3));
  for (VertexId v = 0; v < n; ++v) {
    const VertexId hi = std::min<VertexId>(n - 1, v + 3);
    CHECK(out[v] == Words{hi});
  }
  CHECK(simulate_local_direct(g, MaxIdWithin(3)) == out);
}

TEST_CASE("repository algorithms are functions of their balls") {
  const LabeledMultigraph g0 = testing::random_labeled(50, 3, 0, 23);
  // LocalMis with labels.
  const LocalMis mis(3);
  std::vector<VertexLabel> labels = mis_labels(g0.n(), mis.label_words(), 4, 1);
  std::vector<LabeledEdge> edges(g0.edges().begin(), g0.edges().end());
  const LabeledMultigraph g(g0.n(), edges, labels, 3);
  const LocalOutput direct = simulate_local_direct(g, mis);
  for (VertexId v = 0; v < g.n(); v += 4) {
    CHECK(simulate_on_neighborhood(neighborhood(g, v, mis.rounds()), mis) == direct[v]);
  }
  // LocalPeeling with color bits.
  const LocalPeeling peel(2, 2, 6.0);
  std::vector<VertexLabel> colors(g0.n());
  for (VertexId v = 0; v < g.n(); ++v) colors[v].words = {hash_words(8, {v}) & 3};
  const LabeledMultigraph gp(g0.n(), edges, colors, 3);
  const LocalOutput pd = simulate_local_direct(gp, peel);
  for (VertexId v = 0; v < g.n(); v += 4) {
    CHECK(simulate_on_neighborhood(neighborhood(gp, v, peel.rounds()), peel) == pd[v]);
  }
}
