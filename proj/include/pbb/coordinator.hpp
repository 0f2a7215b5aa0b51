#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pbb/instance.hpp"
#include "pbb/protocol.hpp"
#include "pbb/transport.hpp"
#include "pbb/workunit.hpp"

namespace pbb {

struct CoordinatorConfig {
  std::string checkpoint_path;   // empty = no global checkpointing
  double checkpoint_period_s = 60;
  std::int64_t initial_ub = kNoIncumbent;
  std::vector<int> initial_schedule;
};

struct CoordinatorResult {
  Schedule best;
  std::int64_t best_value = kNoIncumbent;
  std::uint64_t total_nodes = 0;
  std::uint64_t splits = 0;
  std::uint64_t messages = 0;
  double wall_s = 0;
};

struct CheckpointData {
  std::vector<WorkUnit> units;
  std::int64_t best_value = kNoIncumbent;
  std::vector<int> best_schedule;
  std::uint64_t total_nodes = 0;
};

// Saved atomically (temp file + rename); refuses to load against a
// different instance (n, m, matrix fingerprint).
void checkpoint_save(const std::string& path, const Instance& inst, const CheckpointData& data);
CheckpointData checkpoint_load(const std::string& path, const Instance& inst);

// Event loop over worker checkpoints: keeps the unassigned and active
// work-unit lists, intersects returned units against its copies, splits
// the largest active unit when work runs out, tracks the global best and
// writes periodic global checkpoints. Single-threaded; every message except
// each worker's final END is answered exactly once.
class Coordinator {
 public:
  Coordinator(const Instance& inst, CoordinatorConfig cfg);

  // Seed [0, n!) as the initial work (the default when nothing is added).
  void add_initial_interval();
  void add_initial_unit(std::vector<Interval> intervals);
  void restore(const std::string& checkpoint_path);

  CoordinatorResult run(CoordinatorTransport& transport);

  enum class ReplyKind { Work, Best, End };
  struct Reply {
    ReplyKind kind;
    std::vector<Interval> intervals;
  };

  // One WORK checkpoint from worker `key`: intersect (or shortcut when the
  // copy is untouched), steal from the unassigned list or by splitting the
  // largest active unit when the result is empty, store the new copy, and
  // pick the reply. Exposed so lockstep tests can drive the protocol.
  Reply worker_checkpoint(int key, const WorkRequest& req);

  void record_best(std::uint64_t makespan, const std::vector<std::uint32_t>& schedule);

  std::int64_t best_value() const { return best_value_; }
  const std::vector<int>& best_schedule() const { return best_schedule_; }
  bool lists_empty() const { return active_.empty() && unassigned_.empty(); }
  std::uint64_t total_nodes() const { return total_nodes_; }
  std::uint64_t splits() const { return splits_; }
  const std::map<std::uint64_t, WorkUnit>& active_units() const { return active_; }
  const std::vector<WorkUnit>& unassigned_units() const { return unassigned_; }

  void save_now();
  // Make the next abort skip the state flush (simulates a hard kill).
  void kill_for_test() { killed_ = true; }

 private:
  std::vector<Interval> take_from_unassigned(std::uint32_t kmax);
  std::vector<Interval> steal_from_active(std::uint32_t kmax);
  CheckpointData snapshot() const;

  Instance inst_;
  CoordinatorConfig cfg_;
  std::vector<WorkUnit> unassigned_;
  std::map<std::uint64_t, WorkUnit> active_;  // unit id -> coordinator copy
  std::map<int, std::uint64_t> owned_;        // worker key -> unit id
  std::uint64_t next_id_ = 1;
  std::int64_t best_value_ = kNoIncumbent;
  std::vector<int> best_schedule_;
  std::uint64_t total_nodes_ = 0;
  std::uint64_t splits_ = 0;
  bool killed_ = false;
};

}  // namespace pbb
