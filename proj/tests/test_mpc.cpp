#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mpcsim/errors.hpp"
#include "mpcsim/mpc.hpp"
#include "mpcsim/random.hpp"
#include "test_support.hpp"

using namespace mpcsim;

namespace {

MpcConfig config(std::size_t n, std::size_t S, std::size_t M, std::uint64_t cost = 1) {
  MpcConfig c;
  c.n = n;
  c.delta = 0.5;
  c.S = S;
  c.M = M;
  c.primitive_round_cost = cost;
  c.seed = 3;
  return c;
}

std::vector<std::size_t> loads(const MpcRun& run) {
  std::vector<std::size_t> out;
  for (const Machine& m : run.machines()) out.push_back(m.storage.size());
  return out;
}

}  // namespace

TEST_CASE("space per machine is ceil(n^delta)") {
  CHECK(space_per_machine(100, 0.5) == 10);
  CHECK(space_per_machine(101, 0.5) == 11);
  CHECK(space_per_machine(4096, 0.25) == 8);
  CHECK(space_per_machine(1, 0.5) == 1);
}

TEST_CASE("config defaults: M is twice the machines needed for the working set") {
  const MpcConfig c = MpcConfig::make(10000, 5000, 0.5, 1);
  CHECK(c.S == 100);
  CHECK(c.M == 100);
  CHECK(MpcConfig::make(9, 100, 0.5, 1).S == kMinMachineWords);
  MpcConfig bad = c;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.S = 99;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.primitive_round_cost = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("init_run splits edges evenly") {
  // m = 10, M = 5: two edges each.
  const MpcRun a = MpcRun::init_run(testing::path_graph(11), config(11, 4, 5));
  CHECK(loads(a) == std::vector<std::size_t>(5, 2));
  // m = 7, M = 3: loads in {2, 3}, max 3.
  const MpcRun b = MpcRun::init_run(testing::path_graph(8), config(8, 3, 3));
  const auto l = loads(b);
  CHECK(*std::max_element(l.begin(), l.end()) == 3);
  CHECK(*std::min_element(l.begin(), l.end()) == 2);
  CHECK(b.stats().rounds_used == 0);
}

TEST_CASE("input larger than M*S is a capacity error") {
  // m = 9 = M*S + 1 with M = 2, S = 4.
  CHECK_THROWS_AS(MpcRun::init_run(testing::path_graph(10), config(10, 4, 2)), CapacityError);
}

TEST_CASE("an empty round only advances the round counter") {
  MpcRun run = MpcRun::init_run(testing::path_graph(11), config(11, 4, 5));
  const auto before = run.records();
  run.exec_round([](MachineContext&) {});
  CHECK(run.records() == before);
  CHECK(run.stats().rounds_used == 1);
  CHECK(run.stats().exec_rounds == 1);
}

TEST_CASE("storage, outbox and inbox limits are enforced separately") {
  SUBCASE("inbox") {
    MpcRun run(config(16, 4, 3));
    try {
      run.exec_round([](MachineContext& ctx) {
        if (ctx.id() == 0) ctx.send(2, {1, 2, 3});
        if (ctx.id() == 1) ctx.send(2, {1, 2});
      });
      FAIL("expected SpaceExceeded");
    } catch (const SpaceExceeded& e) {
      CHECK(e.which() == SpaceLimit::inbox);
      CHECK(e.machine() == 2);
      CHECK(e.words() == 5);
      CHECK(e.capacity() == 4);
    }
  }
  SUBCASE("outbox") {
    MpcRun run(config(16, 4, 3));
    try {
      run.exec_round([](MachineContext& ctx) {
        if (ctx.id() == 1) ctx.send(0, {1, 2, 3, 4, 5});
      });
      FAIL("expected SpaceExceeded");
    } catch (const SpaceExceeded& e) {
      CHECK(e.which() == SpaceLimit::outbox);
      CHECK(e.machine() == 1);
    }
  }
  SUBCASE("storage") {
    MpcRun run(config(16, 4, 3));
    CHECK_THROWS_AS(run.exec_round([](MachineContext& ctx) {
      if (ctx.id() == 0) ctx.storage().push_back({1, 2, 3, 4, 5});
    }),
                    SpaceExceeded);
  }
  SUBCASE("messages to unknown machines") {
    MpcRun run(config(16, 4, 3));
    CHECK_THROWS_AS(run.exec_round([](MachineContext& ctx) { ctx.send(7, {1}); }),
                    ContractViolation);
  }
}

TEST_CASE("ring shift: every inbox equals the predecessor's outbox") {
  MpcRun run(config(16, 8, 6));
  run.exec_round([](MachineContext& ctx) {
    ctx.send((ctx.id() + 1) % 6, {ctx.id(), ctx.id() * 10, 7});
  });
  std::vector<Words> seen(6);
  run.exec_round([&](MachineContext& ctx) {
    REQUIRE(ctx.inbox().size() == 1);
    seen[ctx.id()] = ctx.inbox()[0].payload;
  });
  for (std::size_t i = 0; i < 6; ++i) {
    const std::size_t p = (i + 5) % 6;
    CHECK(seen[i] == Words{p, p * 10, 7});
  }
}

TEST_CASE("sort primitive orders records globally and is idempotent") {
  MpcRun run(config(100, 200, 10));
  std::vector<Words> recs;
  for (std::uint64_t i = 0; i < 1000; ++i) recs.push_back({hash_words(5, {i}) % 100000});
  run.load_records(recs);
  auto less = [](const Words& a, const Words& b) { return a < b; };
  run.primitive_sort(less);
  const auto sorted = run.records();
  CHECK(std::is_sorted(sorted.begin(), sorted.end()));
  std::sort(recs.begin(), recs.end());
  CHECK(sorted == recs);
  run.primitive_sort(less);
  CHECK(run.records() == sorted);
  CHECK(run.stats().sort_calls == 2);
}

TEST_CASE("prefix sums: plain, segmented, with totals and filtered") {
  MpcRun run(config(16, 16, 4));
  run.load_records({{0}, {0}, {1}, {1}, {1}, {2}});
  SUBCASE("all ones annotate record j with j + 1") {
    run.primitive_prefix_sum([](const Words&) { return 1; });
    const auto r = run.records();
    for (std::size_t j = 0; j < r.size(); ++j) CHECK(r[j].back() == j + 1);
  }
  SUBCASE("segments restart and carry totals") {
    run.primitive_prefix_sum([](const Words&) { return 1; }, [](const Words& r) { return r[0]; },
                             true);
    const auto r = run.records();
    CHECK(r[0] == Words{0, 1, 2});
    CHECK(r[1] == Words{0, 2, 2});
    CHECK(r[4] == Words{1, 3, 3});
    CHECK(r[5] == Words{2, 1, 1});
  }
  SUBCASE("filtered records only") {
    run.primitive_prefix_sum([](const Words&) { return 1; }, {}, false,
                             [](const Words& r) { return r[0] == 1; });
    const auto r = run.records();
    CHECK(r[0] == Words{0});
    CHECK(r[2] == Words{1, 1});
    CHECK(r[4] == Words{1, 3});
    CHECK(r[5] == Words{2});
  }
  CHECK(run.stats().prefix_sum_calls == 1);
}

TEST_CASE("rounds equal exec rounds plus primitives times their cost") {
  for (std::uint64_t cost : {1, 3}) {
    MpcRun run = MpcRun::init_run(testing::path_graph(11), config(11, 4, 5, cost));
    for (int i = 0; i < 4; ++i) run.exec_round([](MachineContext&) {});
    run.primitive_sort([](const Words& a, const Words& b) { return a < b; });
    run.primitive_prefix_sum([](const Words&) { return 1; });
    run.primitive_sort([](const Words& a, const Words& b) { return a > b; });
    CHECK(run.stats().rounds_used == 4 + 3 * cost);
  }
}

TEST_CASE("reconfigure swaps layouts and restores the previous one") {
  MpcRun run = MpcRun::init_run(testing::path_graph(11), config(11, 4, 5));
  const auto before = run.records();
  {
    auto guard = run.reconfigure(2, 50);
    CHECK(run.machine_count() == 2);
    CHECK(run.capacity() == 50);
    run.load_records({{1, 2, 3}});
  }
  CHECK(run.machine_count() == 5);
  CHECK(run.capacity() == 4);
  CHECK(run.records() == before);
  REQUIRE(run.stats().capacity_raises.size() == 1);
  CHECK(run.stats().capacity_raises[0].to == 50);
  CHECK_THROWS_AS((void)run.reconfigure(0, 10), InputError);
  CHECK_THROWS_AS((void)run.reconfigure(2, 3), InputError);
}

TEST_CASE("machine streams differ per machine and round and repeat per seed") {
  MpcRun a(config(16, 4, 3));
  MpcRun b(config(16, 4, 3));
  CHECK(a.machine_seed(0, 1) == b.machine_seed(0, 1));
  CHECK(a.machine_seed(0, 1) != a.machine_seed(1, 1));
  CHECK(a.machine_seed(0, 1) != a.machine_seed(0, 2));
}

TEST_CASE("identical inputs give identical traces") {
  auto trace = [] {
    const Graph g = testing::random_graph(60, 0.1, 4);
    MpcRun run = MpcRun::init_run(g, MpcConfig::for_graph(g, 0.5, 9));
    const std::size_t M = run.machine_count();
    run.exec_round([M](MachineContext& ctx) {
      for (const Words& r : ctx.storage()) ctx.send((ctx.id() + 1) % M, r);
    });
    run.primitive_sort([](const Words& x, const Words& y) { return x > y; });
    return std::pair{run.records(), run.stats()};
  };
  CHECK(trace() == trace());
}
