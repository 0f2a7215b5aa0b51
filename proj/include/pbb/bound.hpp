#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pbb/instance.hpp"

namespace pbb {

inline constexpr std::int64_t kNoIncumbent = INT64_MAX;

enum class BranchDir : std::uint8_t { Forward = 0, Backward = 1 };

// A node of the search tree: jobs at positions 0..d1-1 are the fixed prefix
// sigma1 (in order), jobs at positions n-d2..n-1 the fixed suffix sigma2
// (in order), and the middle holds the free jobs in arbitrary order.
struct Subproblem {
  std::vector<int> perm;
  int d1 = 0;
  int d2 = 0;

  int n() const { return static_cast<int>(perm.size()); }
  int free_count() const { return n() - d1 - d2; }
  std::span<const int> free_jobs() const {
    return std::span<const int>(perm).subspan(static_cast<std::size_t>(d1),
                                              static_cast<std::size_t>(free_count()));
  }
  void validate(const Instance& inst) const;
};

// Per-machine quantities behind LB1: completion times of the prefix
// (front), minimal time from starting the suffix to the end (tail), and
// total remaining work of the free jobs (remain).
struct BoundTables {
  std::vector<std::int64_t> front;
  std::vector<std::int64_t> tail;
  std::vector<std::int64_t> remain;

  void resize(int m) {
    front.assign(static_cast<std::size_t>(m), 0);
    tail.assign(static_cast<std::size_t>(m), 0);
    remain.assign(static_cast<std::size_t>(m), 0);
  }
};

struct Decomposition {
  BranchDir direction = BranchDir::Forward;
  std::vector<std::int64_t> child_lb;   // per free job, in the chosen direction
  std::vector<std::uint8_t> pruned;     // per free job, child_lb >= incumbent
};

// Reusable buffers for the hot path; contents are scratch.
struct BoundScratch {
  BoundTables tables;
  std::vector<std::int64_t> lb_fwd, lb_bwd, row;
  Subproblem sub;
};

void bound_tables(const Instance& inst, const Subproblem& sub, BoundTables& out);
BoundTables bound_tables(const Instance& inst, const Subproblem& sub);

std::int64_t lb1(const Instance& inst, const Subproblem& sub);

// LB1 of every forward child (sigma1 + j) and backward child (j + sigma2),
// O(m) per child by extending the parent's tables.
void children_bounds(const Instance& inst, const Subproblem& sub, const BoundTables& tables,
                     std::span<std::int64_t> lb_fwd, std::span<std::int64_t> lb_bwd);
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> children_bounds(
    const Instance& inst, const Subproblem& sub, const BoundTables& tables);

// Dynamic branching (MinMin): evaluate both child sets, pick the direction
// where the minimal LB over the union occurs less often; ties go to the
// larger LB sum, then Forward. The direction never depends on the
// incumbent; the pruning mask is child_lb >= incumbent.
Decomposition decompose(const Instance& inst, const Subproblem& sub, std::int64_t incumbent);
void decompose(const Instance& inst, const Subproblem& sub, std::int64_t incumbent,
               BoundScratch& scratch, Decomposition& out);

}  // namespace pbb
