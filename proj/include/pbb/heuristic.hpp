#pragma once

#include <cstdint>

#include "pbb/instance.hpp"

namespace pbb {

struct SearchBudget {
  std::uint64_t max_iterations = 0;  // 0 = unbounded
  double max_seconds = 0;            // 0 = unbounded

  void validate() const;  // at least one bound must be set
};

// NEH constructive heuristic: jobs sorted by decreasing total processing
// time (ties to the lower index), each inserted at the makespan-minimizing
// position (ties to the earliest). Deterministic, O(n^2 m).
Schedule neh(const Instance& inst);

// First-improvement remove-and-reinsert descent: positions scanned left to
// right in permutation order until a local optimum or the budget runs out.
// Ties among equally good reinsertions are broken by the seeded rng so runs
// are reproducible. Never returns a schedule worse than the seed.
Schedule insertion_local_search(const Instance& inst, const Schedule& seed, SearchBudget budget,
                                std::uint64_t rng_seed);

}  // namespace pbb
