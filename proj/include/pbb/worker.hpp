#pragma once

#include <cstdint>
#include <string>

#include "pbb/explorer.hpp"
#include "pbb/instance.hpp"
#include "pbb/transport.hpp"

namespace pbb {

struct WorkerConfig {
  PoolConfig pool;
  std::uint32_t worker_id = 0;
  double checkpoint_period_s = 30;
  std::int64_t initial_ub = kNoIncumbent;
  bool hybrid = false;           // run heuristic agents alongside the pool
  int heuristic_agents = 0;
  double heuristic_slice_s = 1.0;
  std::uint64_t rng_seed = 1;
  bool send_initial_best = true;  // offer the NEH schedule to the coordinator up front
};

struct WorkerResult {
  Schedule local_best;
  PoolStats stats;
  std::uint64_t checkpoints_sent = 0;
  std::uint64_t bests_sent = 0;
};

// The worker process: an explorer pool driven in synchronized rounds, one
// dedicated communication agent (the only role touching the transport) and
// optional heuristic agents seeded from promoted pool solutions. At every
// pool synchronization point the triggers fire in priority order: improved
// local best, then a work-unit snapshot (enough successful local steals,
// checkpoint timer elapsed, or pool exhausted). Exploration never blocks on
// the network. Throws TransportError on peer loss.
WorkerResult worker_run(WorkerTransport& transport, const Instance& inst,
                        const WorkerConfig& cfg);

}  // namespace pbb
