#include "mpcsim/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpcsim/errors.hpp"
#include "mpcsim/random.hpp"

namespace mpcsim {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::size_t space_per_machine(std::size_t n, double delta) {
  if (n <= 1) return 1;
  const double s = std::ceil(std::pow(static_cast<double>(n), delta) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(s));
}

std::size_t peeling_working_words(std::size_t n, std::size_t m) {
  return 12 * m + 8 * n + 64;
}

MpcConfig MpcConfig::make(std::size_t n, std::size_t working_words,
                          double delta, std::uint64_t seed,
                          std::uint64_t primitive_round_cost) {
  MpcConfig cfg;
  cfg.n = n;
  cfg.delta = delta;
  cfg.S = std::max(space_per_machine(n, delta), kMinMachineWords);
  cfg.M = std::max<std::size_t>(1, ceil_div(std::max<std::size_t>(working_words, 1), cfg.S) * 2);
  cfg.primitive_round_cost = primitive_round_cost;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

MpcConfig MpcConfig::for_graph(const Graph& g, double delta, std::uint64_t seed,
                               std::uint64_t primitive_round_cost) {
  return make(g.n(), peeling_working_words(g.n(), g.m()), delta, seed,
              primitive_round_cost);
}

void MpcConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0,1)");
  if (S < space_per_machine(n, delta)) throw InputError("S below ceil(n^delta)");
  if (M < 1) throw InputError("need at least one machine");
  if (primitive_round_cost < 1) throw InputError("primitive_round_cost must be >= 1");
}

std::size_t Machine::storage_words() const {
  std::size_t total = external_words;
  for (const Words& r : storage) total += r.size();
  return total;
}

MpcRun::MpcRun(MpcConfig config) : config_(config), capacity_(config.S) {
  config_.validate();
  machines_.resize(config_.M);
  for (std::size_t i = 0; i < machines_.size(); ++i) machines_[i].id = i;
}

MpcRun MpcRun::init_run(const Graph& g, MpcConfig config) {
  MpcRun run(config);
  if (g.m() > run.config_.total_space_budget()) {
    throw CapacityError("input of " + std::to_string(g.m()) +
                        " words exceeds total space " +
                        std::to_string(run.config_.total_space_budget()));
  }
  std::vector<Words> records;
  records.reserve(g.m());
  for (const Edge& e : g.edges()) records.push_back({pack_edge(e.u, e.v)});
  run.distribute(std::move(records));
  return run;
}

void MpcRun::note_peak(std::size_t words) {
  stats_.max_machine_words = std::max(stats_.max_machine_words, words);
  window_peak_ = std::max(window_peak_, words);
}

void MpcRun::distribute(std::vector<Words> records) {
  std::size_t total = 0;
  for (const Words& r : records) total += r.size();
  const unsigned __int128 space =
      static_cast<unsigned __int128>(machines_.size()) * capacity_;
  if (total > space) {
    throw CapacityError(std::to_string(total) + " words exceed total space of " +
                        std::to_string(machines_.size()) + " machines of " +
                        std::to_string(capacity_) + " words");
  }
  const std::size_t count = records.size();
  const std::size_t M = machines_.size();
  const std::size_t base = count / M;
  const std::size_t extra = count % M;
  std::size_t next = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t take = base + (i < extra ? 1 : 0);
    auto& storage = machines_[i].storage;
    storage.clear();
    storage.reserve(take);
    for (std::size_t j = 0; j < take; ++j) storage.push_back(std::move(records[next++]));
  }
  check_storage();
}

void MpcRun::check_storage() {
  std::size_t total = 0;
  for (const Machine& m : machines_) {
    const std::size_t w = m.storage_words();
    total += w;
    note_peak(w);
    if (w > capacity_) throw SpaceExceeded(m.id, SpaceLimit::storage, w, capacity_);
  }
  stats_.total_words = std::max(stats_.total_words, total);
}

void MpcRun::load_records(std::vector<Words> records) {
  distribute(std::move(records));
}

std::vector<Words> MpcRun::records() const {
  std::vector<Words> out;
  for (const Machine& m : machines_) {
    out.insert(out.end(), m.storage.begin(), m.storage.end());
  }
  return out;
}

void MpcRun::exec_round(const Step& step) {
  const std::size_t M = machines_.size();
  std::vector<std::vector<Message>> outboxes(M);
  for (std::size_t i = 0; i < M; ++i) {
    Machine& machine = machines_[i];
    std::vector<Message> inbox = std::move(machine.inbox);
    machine.inbox.clear();
    MachineContext ctx(machine, inbox, outboxes[i], capacity_);
    step(ctx);
    std::size_t out_words = 0;
    for (const Message& msg : outboxes[i]) {
      if (msg.dest >= M) {
        throw ContractViolation("message addressed to machine " +
                                std::to_string(msg.dest) + " of " +
                                std::to_string(M));
      }
      out_words += msg.words();
    }
    note_peak(out_words);
    if (out_words > capacity_) {
      throw SpaceExceeded(i, SpaceLimit::outbox, out_words, capacity_);
    }
  }
  check_storage();

  std::vector<std::size_t> in_words(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    for (Message& msg : outboxes[i]) {
      in_words[msg.dest] += msg.words();
      machines_[msg.dest].inbox.push_back(std::move(msg));
    }
  }
  for (std::size_t i = 0; i < M; ++i) {
    note_peak(in_words[i]);
    if (in_words[i] > capacity_) {
      throw SpaceExceeded(i, SpaceLimit::inbox, in_words[i], capacity_);
    }
  }
  ++stats_.rounds_used;
  ++stats_.exec_rounds;
}

void MpcRun::charge_primitive(bool sort) {
  stats_.rounds_used += config_.primitive_round_cost;
  if (sort) {
    ++stats_.sort_calls;
  } else {
    ++stats_.prefix_sum_calls;
  }
}

void MpcRun::primitive_sort(const Less& less) {
  std::vector<Words> all = records();
  std::stable_sort(all.begin(), all.end(), less);
  distribute(std::move(all));
  charge_primitive(true);
}

void MpcRun::primitive_prefix_sum(const ValueFn& value, const SegmentFn& segment,
                                  bool append_total, const FilterFn& filter) {
  // Global order is machine order, then local order.
  std::vector<Words*> seq;
  for (Machine& m : machines_) {
    for (Words& r : m.storage) {
      if (!filter || filter(r)) seq.push_back(&r);
    }
  }
  std::size_t start = 0;
  while (start < seq.size()) {
    std::size_t end = start + 1;
    if (segment) {
      const std::uint64_t key = segment(*seq[start]);
      while (end < seq.size() && segment(*seq[end]) == key) ++end;
    } else {
      end = seq.size();
    }
    std::uint64_t running = 0;
    std::vector<std::uint64_t> sums;
    sums.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) {
      running += value(*seq[i]);
      sums.push_back(running);
    }
    for (std::size_t i = start; i < end; ++i) {
      seq[i]->push_back(sums[i - start]);
      if (append_total) seq[i]->push_back(running);
    }
    start = end;
  }
  check_storage();
  charge_primitive(false);
}

MpcRun::LayoutGuard::LayoutGuard(MpcRun* run, std::vector<Machine> saved,
                                 std::size_t capacity)
    : run_(run), saved_(std::move(saved)), saved_capacity_(capacity) {}

MpcRun::LayoutGuard::LayoutGuard(LayoutGuard&& other) noexcept
    : run_(other.run_),
      saved_(std::move(other.saved_)),
      saved_capacity_(other.saved_capacity_) {
  other.run_ = nullptr;
}

MpcRun::LayoutGuard::~LayoutGuard() {
  if (run_ == nullptr) return;
  run_->machines_ = std::move(saved_);
  run_->capacity_ = saved_capacity_;
}

MpcRun::LayoutGuard MpcRun::reconfigure(std::size_t machines,
                                        std::size_t capacity) {
  if (machines == 0) throw InputError("reconfigure: need at least one machine");
  if (capacity < config_.S) throw InputError("reconfigure: capacity below S");
  if (capacity > config_.S) {
    stats_.capacity_raises.push_back({config_.S, capacity, stats_.rounds_used});
  }
  LayoutGuard guard(this, std::move(machines_), capacity_);
  machines_.assign(machines, Machine{});
  for (std::size_t i = 0; i < machines; ++i) machines_[i].id = i;
  capacity_ = capacity;
  return guard;
}

std::uint64_t MpcRun::machine_seed(std::size_t machine, std::uint64_t round) const {
  return hash_words(config_.seed, {stream::kMachine, machine, round});
}

}  // namespace mpcsim
