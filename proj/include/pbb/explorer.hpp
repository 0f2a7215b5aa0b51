#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "pbb/bound.hpp"
#include "pbb/instance.hpp"
#include "pbb/ivm.hpp"
#include "pbb/workunit.hpp"

namespace pbb {

enum class StepOutcome : std::uint8_t { Decomposed, ImprovedBest, Exhausted };

// One BB iteration on one explorer: select the next open node; decompose
// and branch internal nodes; evaluate the completed schedule at leaf nodes
// (one free job or none). Returns ImprovedBest when a leaf beats
// improve_bound (its makespan is then in *improved).
StepOutcome explore_step(Ivm& ivm, const Instance& inst, std::int64_t prune_bound,
                         std::int64_t improve_bound, BoundScratch& scratch, Decomposition& dec,
                         std::uint64_t& decomposed, std::uint64_t& leaves, Schedule* improved,
                         std::vector<std::uint64_t>* census);

// Split [a,b) at its midpoint: victim keeps [a, mid), thief gets [mid, b).
// Refused (throws) when b - a < 2.
std::pair<Interval, Interval> steal_right_half(const Interval& iv);

struct PoolConfig {
  int explorers = 0;    // K; 0 = 2x hardware execution units
  int threads = 0;      // 0 = min(K, hardware)
  int batch_steps = 1024;
  bool disable_pruning = false;
  bool record_census = false;  // collect decoded leaf indices (needs n <= 20)
  std::string timeline_path;
  double time_limit_s = 0;  // 0 = none
  BigCount min_steal_len;   // 0 = min(8!, ceil(n!/4K))
};

struct PoolStats {
  std::uint64_t decomposed = 0;
  std::uint64_t leaves = 0;
  std::uint64_t improvements = 0;
  std::uint64_t local_steals = 0;
  std::uint64_t steal_phases = 0;
  std::uint64_t intervals_initialized = 0;
  double wall_s = 0;
  bool completed = true;
};

struct PoolResult {
  Schedule best;             // empty perm when no schedule beat the initial bound
  std::int64_t best_value;   // min(initial bound, best found)
  PoolStats stats;
  std::vector<std::uint64_t> census;
};

// Pool of K IVM-driven explorers run in synchronized rounds: every active
// explorer performs a batch of steps, then a steal phase redistributes
// intervals when more than 20% of the explorers have gone idle.
class ExplorerPool {
 public:
  ExplorerPool(const Instance& inst, PoolConfig cfg);

  int K() const { return static_cast<int>(slots_.size()); }
  const Instance& instance() const { return inst_; }

  void set_initial_bound(std::int64_t ub, std::span<const int> sched);

  // Distribute intervals one per explorer; pool must be idle.
  void assign_fresh(std::span<const Interval> intervals);

  // Adopt a coordinator update: the new interval set intersected with the
  // current remaining work replaces the pool state; surplus explorers go
  // idle. Throws if more intervals than explorers arrive.
  void apply_work_update(std::span<const Interval> intervals);

  // One synchronized round; returns the number of active explorers after.
  int run_round();

  int active_count() const;
  std::vector<Interval> snapshot_intervals() const;

  std::int64_t best_value() const;
  Schedule best_schedule() const;         // the best schedule seen by this pool
  void offer_bound(std::int64_t value);   // bound-only update (no schedule)
  bool offer_schedule(const Schedule& cand);  // e.g. from a heuristic agent
  bool improved_since_mark();             // local schedule improved; resets the mark
  std::uint64_t steals_since_mark() const { return steals_since_mark_; }
  void reset_steal_mark() { steals_since_mark_ = 0; }

  // Current subproblems completed by ordering free jobs as in the best
  // schedule; the best `capacity` promotions, best first.
  std::vector<Schedule> promote_solutions(int capacity);

  PoolStats stats() const;
  std::vector<std::uint64_t> take_census();
  void flush_timeline();

 private:
  struct Slot {
    explicit Slot(int n) : ivm(n) {}
    Ivm ivm;
    BoundScratch scratch;
    Decomposition dec;
    std::uint64_t decomposed = 0;
    std::uint64_t leaves = 0;
    std::vector<std::uint64_t> census;
  };

  void run_batch(Slot& slot);
  void steal_phase();
  bool do_steal(int victim, int thief);
  void sample_timeline(bool force);
  std::int64_t prune_bound() const;
  void init_slot(Slot& slot, const Interval& iv);

  const Instance inst_;
  PoolConfig cfg_;
  std::vector<std::unique_ptr<Slot>> slots_;
  BigCount min_steal_len_;

  mutable std::mutex best_mu_;
  std::atomic<std::int64_t> best_value_{kNoIncumbent};
  std::vector<int> best_sched_;
  std::int64_t best_sched_value_ = kNoIncumbent;
  std::int64_t improvement_mark_ = kNoIncumbent;

  std::atomic<std::uint64_t> improvements_{0};
  std::uint64_t local_steals_ = 0;
  std::uint64_t steal_phases_ = 0;
  std::uint64_t intervals_initialized_ = 0;
  std::uint64_t steals_since_mark_ = 0;

  std::unique_ptr<class TimelineWriter> timeline_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point last_sample_{};
};

PoolResult pool_run(const Instance& inst, std::int64_t initial_ub,
                    std::span<const Interval> intervals, const PoolConfig& cfg);

}  // namespace pbb
