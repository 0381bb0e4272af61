#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mpcsim/compression.hpp"
#include "mpcsim/graph.hpp"
#include "mpcsim/local.hpp"
#include "mpcsim/mpc.hpp"

namespace mpcsim {

/// One peeling phase: threshold Delta_i, heavy set H_i, friends F_i, the
/// matched edges M_i and the vertices C_i = H_i u F_i moved into the cover.
struct PhaseTrace {
  std::string source;  // "global" or "local"
  std::uint64_t phase = 0;
  double delta = 0;
  std::vector<VertexId> heavy;
  std::vector<VertexId> friends;
  std::vector<Edge> matched;
  std::vector<VertexId> covered;
  /// Heavy vertices that are an endpoint of M_i.
  std::size_t heavy_matched = 0;
};

/// One outer iteration of the compressed matcher.
struct MatchIteration {
  double delta = 0;
  std::uint32_t k_prime = 0;
  double p = 0;
  bool p_clamped = false;
  std::size_t sampled_max_degree = 0;
  /// 4 k' 2^k' lambda log n.
  double sampled_degree_bound = 0;
  std::size_t residual_max_degree_after = 0;
  double delta_after = 0;
  CompressionReport compression;
};

struct PeelingOutput {
  std::vector<Edge> matching;   // sorted, u < v
  std::vector<VertexId> cover;  // sorted
  std::vector<PhaseTrace> phases;
  std::vector<MatchIteration> iterations;
  /// Degree bound handed to the direct peeling that finishes the residual.
  double fallback_bound = 0;
  /// Whether the residual respected that bound.
  bool fallback_bound_held = true;
  std::uint64_t rounds = 0;
  std::size_t max_machine_words = 0;
  std::size_t total_words = 0;
};

/// In-memory peeling: Delta starts at d and halves until below 1. Heavy
/// vertices pick a uniform alive neighbor as friend; (v, f(v)) is matched
/// when v is blue, f(v) red and v is the only blue claimant of f(v).
/// Draws come from `seed`. Stops early once the residual has no edges.
/// Throws InputError if the maximum degree exceeds d.
PeelingOutput global_peeling(const Graph& g, double d, std::uint64_t seed);

/// The same process on the simulator, with the same draws (run seed). The
/// run must hold the edges of g, e.g. from MpcRun::init_run. Costs 6 rounds
/// and 9 primitives per phase plus one edge count to stop.
PeelingOutput mpc_global_peeling(MpcRun& run, const Graph& g, double d);

struct MatchMpcParams {
  std::uint32_t k = 2;
  std::uint32_t lambda = 32;
  /// 0 selects 1000 n^3.
  std::uint64_t rho_max = 0;
  std::uint64_t seed = 0;
  /// Machine space exponent for runs created by boost and (2+eps).
  double delta = 0.5;
  std::uint64_t primitive_round_cost = 1;
  CompressionOptions compression;
};

std::uint64_t default_rho_max(std::size_t n);

/// Residual edges sampled independently for each phase i in [1, k'] with
/// probability p = min(1, 2^k' lambda log n / Delta), each copy labeled
/// (i, rho_u, rho_v); vertex v carries k' color bits (bit i-1 for phase i).
struct SampledMultigraph {
  LabeledMultigraph graph;
  double p = 0;
  bool clamped = false;
};
SampledMultigraph build_sampled_multigraph(const Graph& residual, double Delta,
                                           std::uint32_t k_prime,
                                           std::uint32_t lambda,
                                           std::uint64_t rho_max,
                                           std::uint64_t seed,
                                           std::uint64_t iteration = 1);

/// k' peeling phases on a sampled multigraph as a LOCAL algorithm. Each phase
/// uses a status round (alive flags plus the previous phase's match
/// confirmation) and a claim round; one final round delivers the last
/// confirmations, so rounds() = 2k' + 1. Output per vertex:
/// [in_cover, mate + 1 (0 if unmatched), heavy mask, friend mask, matched
/// mask], bit i-1 of a mask standing for phase i.
class LocalPeeling final : public LocalAlgorithm {
 public:
  static constexpr std::uint32_t kRoundsPerPhase = 2;

  LocalPeeling(std::uint32_t k_prime, std::uint32_t lambda, double log_n);

  std::uint32_t rounds() const override { return kRoundsPerPhase * k_ + 1; }
  std::size_t state_bound() const override { return 9; }
  std::size_t output_bound() const override { return 5; }

  /// Heavy threshold of phase i: 2^k' lambda log n / 2^i.
  double threshold(std::uint32_t phase) const;

  Words initial_state(const VertexContext& v) const override;
  std::vector<Words> send(const VertexContext& v, const Words& state,
                          std::uint32_t round) const override;
  Words receive(const VertexContext& v, Words state, std::span<const Words> inbox,
                std::uint32_t round) const override;
  Words output(const VertexContext& v, const Words& state) const override;

 private:
  std::uint32_t k_;
  double delta_local_;
};

/// Matching, cover and per-phase traces decoded from LocalPeeling outputs.
/// `outer_delta` is the global threshold before the first phase.
struct LocalPeelingResult {
  std::vector<Edge> matching;
  std::vector<VertexId> cover;
  std::vector<PhaseTrace> phases;
};
LocalPeelingResult decode_local_peeling(const LocalOutput& out,
                                        std::uint32_t k_prime, double outer_delta);

/// Compressed matcher: while Delta > lambda^2 log n, samples a multigraph for
/// k' = min(k, ceil(log(Delta / (lambda^2 log n)))) phases, runs LocalPeeling
/// through round compression, removes the new cover vertices and divides
/// Delta by 2^k'; the residual is finished by direct peeling from 2 Delta.
/// The run must hold the edges of g.
PeelingOutput match_mpc(MpcRun& run, const Graph& g, const MatchMpcParams& params);

/// Fresh run sized by MpcConfig::for_graph and loaded with g.
MpcRun make_run(const Graph& g, double delta, std::uint64_t seed,
                std::uint64_t primitive_round_cost = 1);

enum class BoostGoal { matching, cover };

/// Best of `trials` independent match_mpc runs: largest matching, or smallest
/// cover. Throws InputError if trials == 0.
PeelingOutput boost(const Graph& g, const MatchMpcParams& params,
                    std::size_t trials, BoostGoal goal = BoostGoal::matching);

/// Repeats the constant-factor matcher ceil(3 log(1/eps)) times, each time on
/// the subgraph induced by still-unmatched vertices, stopping early when no
/// edge is left. The cover is every matched endpoint plus a cover of the
/// final residual.
struct TwoPlusEpsResult {
  std::vector<Edge> matching;
  std::vector<VertexId> cover;
  std::size_t repetitions = 0;
  std::uint64_t rounds = 0;
  std::size_t max_machine_words = 0;
  std::size_t total_words = 0;
};
std::size_t two_plus_eps_repetitions(double eps);
TwoPlusEpsResult two_plus_eps(const Graph& g, const MatchMpcParams& params, double eps);
std::vector<Edge> two_plus_eps_matching(const Graph& g, const MatchMpcParams& params,
                                        double eps);
std::vector<VertexId> two_plus_eps_cover(const Graph& g, const MatchMpcParams& params,
                                         double eps);

}  // namespace mpcsim
