#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/local.hpp"
#include "mpcsim/mpc.hpp"
#include "mpcsim/neighborhood.hpp"

namespace mpcsim {

/// Radius-doubling schedule for collecting N_t(v): each step grows the known
/// radius r to r + r' + 1 with r' = min(r, t - r - 1).
struct CompressionPlan {
  std::uint32_t t = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> schedule;  // (r, r')
  std::size_t degree = 2;
  std::size_t label_words = 0;       // l_V
  std::size_t edge_label_words = 0;  // l_E
  std::size_t state_words = 0;       // s_A
  /// d^t (l_V + d(1 + l_E) + s_A); saturates at kSaturatedWords.
  double s_star = 0;

  std::size_t iterations() const { return schedule.size(); }
  /// 0, then the radius after every step.
  std::vector<std::uint32_t> radii() const;
};

inline constexpr double kSaturatedWords = 4.0e18;

/// Throws InputError if d < 2.
CompressionPlan plan(std::uint32_t t, std::size_t d, std::size_t l_V,
                     std::size_t l_E, std::size_t s_A);

enum class BallMode {
  /// Materialized when the summed ball size is below the limit, else accounted.
  automatic,
  /// Every machine holds the encoded N_r(v) of its vertices; messages carry
  /// encoded neighborhoods; outputs come from simulating A on each ball.
  materialized,
  /// Same rounds and the same per-message and per-machine word charges, but
  /// balls are tracked by size only and outputs come from one direct LOCAL
  /// simulation, spot-checked against per-ball simulation.
  accounted,
};

const char* to_string(BallMode mode);

struct CompressionOptions {
  BallMode mode = BallMode::automatic;
  /// Machines of the call hold max(S, space_factor * s*) words.
  double space_factor = 4.0;
  /// Summed ball words plus the largest per-step response traffic above
  /// which automatic picks the accounted mode.
  std::size_t materialize_limit = 20'000'000;
  /// Vertices re-simulated on their ball in accounted mode.
  std::size_t spot_checks = 8;
};

struct CompressionReport {
  CompressionPlan plan;
  BallMode mode = BallMode::materialized;
  std::uint64_t rounds = 0;
  std::size_t peak_machine_words = 0;
  std::size_t capacity = 0;
  std::size_t vertices_per_machine = 1;
  std::size_t machines = 1;
  std::size_t total_ball_words = 0;  // sum over v of |N_t(v)| in words
  bool capacity_raised = false;
};

/// Per-iteration trace of the request round.
struct GatherTrace {
  /// requests[v] = vertices at distance r+1 whose balls v asked for.
  std::vector<std::vector<VertexId>> requests;
  /// requested_machines[v] = owners asked by v, deduplicated.
  std::vector<std::vector<std::size_t>> requested_machines;
  std::size_t messages = 0;
};

/// Materialized execution of the radius-doubling gather on an MpcRun. Owns a
/// temporary machine layout for the lifetime of the object. Vertex v lives on
/// machine v / vertices_per_machine.
class RoundCompressor {
 public:
  RoundCompressor(MpcRun& run, const LabeledMultigraph& g,
                  std::size_t vertices_per_machine, std::size_t capacity);

  std::size_t owner(VertexId v) const { return v / vertices_per_machine_; }
  /// Radius of the balls after the pending combine.
  std::uint32_t radius() const {
    return pending_extension_ ? radius_ + *pending_extension_ + 1 : radius_;
  }

  /// Sorts vertex ids onto machines, then builds N_0(v) at each owner.
  void load();

  /// Request round then response round. Afterwards every owner has received
  /// N_{r'}(w) for all w at distance r+1; the combine into N_{r+r'+1}(v)
  /// happens in the local computation of the next round.
  GatherTrace gather_step(std::uint32_t r_prime);

  /// Current ball of every vertex, including not-yet-combined responses.
  std::vector<Neighborhood> balls() const;

  /// Combine round plus local simulation of `a` on every ball.
  LocalOutput finish(const LocalAlgorithm& a);

 private:
  std::vector<Neighborhood> current(const std::vector<Words>& storage,
                                    std::span<const Message> inbox) const;
  std::size_t first_owned(std::size_t machine) const {
    return machine * vertices_per_machine_;
  }

  MpcRun& run_;
  const LabeledMultigraph& g_;
  std::size_t vertices_per_machine_;
  MpcRun::LayoutGuard layout_;
  std::uint32_t radius_ = 0;
  bool pending_load_ = false;
  std::optional<std::uint32_t> pending_extension_;
};

/// Runs `a` on g through radius doubling on the simulator. The output equals
/// simulate_local_direct(g, a).
LocalOutput round_compression(MpcRun& run, const LabeledMultigraph& g,
                              const LocalAlgorithm& a,
                              const CompressionOptions& options = {},
                              CompressionReport* report = nullptr);

/// Runs the phase algorithms one after another; phase j+1 sees the outputs of
/// phase j as its vertex labels. Each phase is compressed on its own.
LocalOutput phased_round_compression(
    MpcRun& run, const LabeledMultigraph& g,
    std::span<const LocalAlgorithm* const> phases,
    const CompressionOptions& options = {},
    std::vector<CompressionReport>* reports = nullptr);

/// Runs `a` round by round on the simulator without compression: vertex v
/// lives on machine v / vertices_per_machine and every LOCAL message becomes
/// one MPC message of 2 + its length words. Costs one sort and
/// a.rounds() + 2 rounds. `message_words` bounds one LOCAL message and sizes
/// the machines.
LocalOutput direct_mpc_simulation(MpcRun& run, const LabeledMultigraph& g,
                                  const LocalAlgorithm& a,
                                  std::size_t message_words);

/// Per-vertex words of N_rho(v) for rho = 0..t, computed by one truncated BFS.
std::vector<std::size_t> ball_words_by_radius(const LabeledMultigraph& g,
                                              VertexId v, std::uint32_t t);

}  // namespace mpcsim
