#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mpcsim/graph.hpp"
#include "mpcsim/types.hpp"

namespace mpcsim {

/// ceil(n^delta), at least 1.
std::size_t space_per_machine(std::size_t n, double delta);

/// Floor on S used by MpcConfig::make: one transient record with its prefix
/// annotations must fit on a machine next to a few others.
inline constexpr std::size_t kMinMachineWords = 16;

/// Working-set estimate (in words) of the record-based peeling and MIS
/// drivers on an n-vertex, m-edge graph.
std::size_t peeling_working_words(std::size_t n, std::size_t m);

struct MpcConfig {
  std::size_t n = 0;
  double delta = 0.5;
  std::size_t S = 1;  // words per machine
  std::size_t M = 1;  // machine count
  std::uint64_t primitive_round_cost = 1;
  std::uint64_t seed = 0;

  std::size_t total_space_budget() const { return M * S; }

  /// S = max(ceil(n^delta), kMinMachineWords); M = ceil(working_words / S) * 2.
  static MpcConfig make(std::size_t n, std::size_t working_words, double delta,
                        std::uint64_t seed,
                        std::uint64_t primitive_round_cost = 1);

  /// Config sized for the peeling/MIS drivers on g.
  static MpcConfig for_graph(const Graph& g, double delta, std::uint64_t seed,
                             std::uint64_t primitive_round_cost = 1);

  /// Throws InputError unless delta in (0,1), S >= ceil(n^delta), M >= 1 and
  /// primitive_round_cost >= 1.
  void validate() const;
};

/// An addressed message. `accounted` overrides the charged size when the
/// payload is carried by reference (see round compression's accounted mode).
struct Message {
  std::size_t dest = 0;
  Words payload;
  std::size_t accounted = 0;

  std::size_t words() const {
    return accounted != 0 ? accounted : payload.size();
  }
};

struct Machine {
  std::size_t id = 0;
  std::vector<Words> storage;
  /// Words held in algorithm-managed state outside `storage`.
  std::size_t external_words = 0;
  std::vector<Message> inbox;

  std::size_t storage_words() const;
};

struct CapacityRaise {
  std::size_t from = 0;
  std::size_t to = 0;
  std::uint64_t at_round = 0;

  friend bool operator==(const CapacityRaise&, const CapacityRaise&) = default;
};

struct RoundStats {
  std::uint64_t rounds_used = 0;
  std::uint64_t exec_rounds = 0;
  /// Peak over all rounds of the largest storage, outbox or inbox.
  std::size_t max_machine_words = 0;
  /// Peak over all rounds of the summed storage of all machines.
  std::size_t total_words = 0;
  std::uint64_t sort_calls = 0;
  std::uint64_t prefix_sum_calls = 0;
  std::vector<CapacityRaise> capacity_raises;

  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

/// Handed to the per-machine step of exec_round.
class MachineContext {
 public:
  MachineContext(Machine& machine, std::span<const Message> inbox,
                 std::vector<Message>& outbox, std::size_t capacity)
      : machine_(machine), inbox_(inbox), outbox_(outbox), capacity_(capacity) {}

  std::size_t id() const { return machine_.id; }
  std::size_t capacity() const { return capacity_; }
  std::vector<Words>& storage() { return machine_.storage; }
  std::span<const Message> inbox() const { return inbox_; }
  void send(std::size_t dest, Words payload, std::size_t accounted = 0) {
    outbox_.push_back({dest, std::move(payload), accounted});
  }
  void set_external_words(std::size_t words) { machine_.external_words = words; }

 private:
  Machine& machine_;
  std::span<const Message> inbox_;
  std::vector<Message>& outbox_;
  std::size_t capacity_;
};

/// A simulated MPC execution: M machines of S words, synchronous rounds.
/// Every round checks storage, outbox and inbox of every machine against S
/// independently and throws SpaceExceeded on violation.
class MpcRun {
 public:
  using Step = std::function<void(MachineContext&)>;
  using Less = std::function<bool(const Words&, const Words&)>;
  using ValueFn = std::function<std::uint64_t(const Words&)>;
  using SegmentFn = std::function<std::uint64_t(const Words&)>;
  using FilterFn = std::function<bool(const Words&)>;

  explicit MpcRun(MpcConfig config);

  /// Loads the edges of g as one-word records, split evenly over machines.
  /// Throws CapacityError if m > M*S.
  static MpcRun init_run(const Graph& g, MpcConfig config);

  const MpcConfig& config() const { return config_; }
  std::size_t machine_count() const { return machines_.size(); }
  std::size_t capacity() const { return capacity_; }
  const RoundStats& stats() const { return stats_; }
  std::span<const Machine> machines() const { return machines_; }

  /// One synchronous round: every machine runs `step` on its storage and the
  /// messages delivered at the end of the previous round, then all outboxes
  /// are routed at once.
  void exec_round(const Step& step);

  /// Globally sorts all storage records and spreads them evenly in order.
  /// Charged primitive_round_cost rounds.
  void primitive_sort(const Less& less);

  /// Appends to every record the inclusive prefix sum of `value` in global
  /// order; with `segment`, the sum restarts whenever the segment key
  /// changes. With `append_total`, also appends the segment total. With
  /// `filter`, only the selected records take part and are annotated.
  /// Charged primitive_round_cost rounds.
  void primitive_prefix_sum(const ValueFn& value, const SegmentFn& segment = {},
                            bool append_total = false,
                            const FilterFn& filter = {});

  /// Replaces all storage with `records`, split evenly. No rounds charged.
  void load_records(std::vector<Words> records);

  /// All storage records in global order (machine order, then local order).
  std::vector<Words> records() const;

  /// Temporarily swaps in `machines` fresh machines of `capacity` words; the
  /// previous machines come back when the returned guard is destroyed.
  class LayoutGuard {
   public:
    LayoutGuard(LayoutGuard&&) noexcept;
    LayoutGuard& operator=(LayoutGuard&&) = delete;
    ~LayoutGuard();

   private:
    friend class MpcRun;
    LayoutGuard(MpcRun* run, std::vector<Machine> saved, std::size_t capacity);
    MpcRun* run_;
    std::vector<Machine> saved_;
    std::size_t saved_capacity_;
  };
  [[nodiscard]] LayoutGuard reconfigure(std::size_t machines,
                                        std::size_t capacity);

  /// Seed of the independent stream of one machine in one round.
  std::uint64_t machine_seed(std::size_t machine, std::uint64_t round) const;

  /// Peak per-machine words since the last begin_window().
  void begin_window() { window_peak_ = 0; }
  std::size_t window_peak() const { return window_peak_; }

 private:
  void distribute(std::vector<Words> records);
  void check_storage();
  void charge_primitive(bool sort);
  void note_peak(std::size_t words);

  MpcConfig config_;
  std::size_t capacity_;
  std::vector<Machine> machines_;
  RoundStats stats_;
  std::size_t window_peak_ = 0;
};

/// Packs an edge into a single word: (u << 32) | v.
constexpr Word pack_edge(VertexId u, VertexId v) {
  return (static_cast<Word>(u) << 32) | v;
}
constexpr Edge unpack_edge(Word w) {
  return {static_cast<VertexId>(w >> 32), static_cast<VertexId>(w & 0xffffffffULL)};
}

}  // namespace mpcsim
