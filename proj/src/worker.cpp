#include "pbb/worker.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

#include "pbb/heuristic.hpp"

namespace pbb {

namespace {

using clock = std::chrono::steady_clock;

// Single-slot producer-consumer buffers between the pool role and the
// communication agent.
struct Outbox {
  struct Item {
    bool is_best = false;
    Schedule best;
    std::vector<Interval> snapshot;
    std::uint64_t nodes_delta = 0;
  };

  std::mutex mu;
  std::condition_variable cv;
  std::optional<Item> slot;
  bool shutdown = false;

  bool try_put(Item&& item) {
    {
      std::scoped_lock lk(mu);
      if (slot.has_value() || shutdown) return false;
      slot = std::move(item);
    }
    cv.notify_all();
    return true;
  }

  std::optional<Item> wait_take() {
    std::unique_lock lk(mu);
    cv.wait(lk, [this] { return slot.has_value() || shutdown; });
    if (!slot.has_value()) return std::nullopt;
    std::optional<Item> out = std::move(slot);
    slot.reset();
    cv.notify_all();
    return out;
  }

  void close() {
    {
      std::scoped_lock lk(mu);
      shutdown = true;
    }
    cv.notify_all();
  }
};

struct Inbox {
  std::mutex mu;
  std::condition_variable cv;
  std::optional<std::vector<Interval>> work;
  std::atomic<bool> terminated{false};
  std::string error;

  // Communication side: park the update and block until the pool copied it.
  void put_work_and_wait(std::vector<Interval> intervals) {
    std::unique_lock lk(mu);
    work = std::move(intervals);
    cv.notify_all();
    cv.wait(lk, [this] { return !work.has_value() || terminated.load(); });
  }

  std::optional<std::vector<Interval>> take_work() {
    std::scoped_lock lk(mu);
    if (!work.has_value()) return std::nullopt;
    std::optional<std::vector<Interval>> out = std::move(work);
    work.reset();
    cv.notify_all();
    return out;
  }

  void terminate(const std::string& err = {}) {
    {
      std::scoped_lock lk(mu);
      if (!err.empty() && error.empty()) error = err;
      terminated.store(true);
    }
    cv.notify_all();
  }
};

struct PromotionBuffer {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Schedule> seeds;
  bool closed = false;

  void refill(std::vector<Schedule> fresh, std::size_t capacity) {
    {
      std::scoped_lock lk(mu);
      for (Schedule& s : fresh) {
        seeds.push_back(std::move(s));
        if (seeds.size() > capacity) seeds.pop_front();
      }
    }
    cv.notify_all();
  }

  std::optional<Schedule> take() {
    std::unique_lock lk(mu);
    cv.wait(lk, [this] { return !seeds.empty() || closed; });
    if (seeds.empty()) return std::nullopt;
    Schedule s = std::move(seeds.front());
    seeds.pop_front();
    return s;
  }

  void close() {
    {
      std::scoped_lock lk(mu);
      closed = true;
    }
    cv.notify_all();
  }
};

std::vector<std::uint32_t> to_wire(const std::vector<int>& perm) {
  return {perm.begin(), perm.end()};
}

}  // namespace

WorkerResult worker_run(WorkerTransport& transport, const Instance& inst,
                        const WorkerConfig& cfg) {
  ExplorerPool pool(inst, cfg.pool);

  // Initial upper bound: NEH refined by a short insertion descent, capped
  // by a caller-provided bound if one is given.
  Schedule seed = neh(inst);
  if (inst.n > 1) {
    SearchBudget bud;
    bud.max_iterations = 2000;
    seed = insertion_local_search(inst, seed, bud, cfg.rng_seed);
  }
  pool.set_initial_bound(seed.cmax, seed.perm);
  if (cfg.initial_ub != kNoIncumbent) pool.offer_bound(cfg.initial_ub);
  pool.improved_since_mark();  // the seed itself is not an improvement to report

  Outbox outbox;
  Inbox inbox;
  WorkerResult res;

  std::thread comm([&] {
    try {
      for (;;) {
        std::optional<Outbox::Item> item = outbox.wait_take();
        if (!item) return;  // shut down locally
        if (item->is_best) {
          transport.send(BestMsg{static_cast<std::uint64_t>(item->best.cmax),
                                 to_wire(item->best.perm)});
        } else {
          WorkRequest req;
          req.worker_id = cfg.worker_id;
          req.nodes_since_checkpoint = item->nodes_delta;
          req.kmax = static_cast<std::uint32_t>(pool.K());
          req.intervals = std::move(item->snapshot);
          transport.send(std::move(req));
        }
        Message reply = transport.receive();
        if (const auto* best = std::get_if<BestMsg>(&reply)) {
          if (best->makespan != kNoMakespan) {
            pool.offer_bound(static_cast<std::int64_t>(best->makespan));
          }
        } else if (auto* work = std::get_if<WorkReply>(&reply)) {
          inbox.put_work_and_wait(std::move(work->intervals));
        } else if (const auto* end = std::get_if<EndMsg>(&reply)) {
          if (end->makespan != kNoMakespan) {
            pool.offer_bound(static_cast<std::int64_t>(end->makespan));
          }
          const Schedule local = pool.best_schedule();
          EndMsg bye;
          if (local.evaluated()) {
            bye.makespan = static_cast<std::uint64_t>(local.cmax);
            bye.schedule = to_wire(local.perm);
          }
          transport.send(bye);
          inbox.terminate();
          return;
        } else {
          inbox.terminate("unexpected message from coordinator");
          return;
        }
      }
    } catch (const TransportError& e) {
      inbox.terminate(e.what());
    }
  });

  PromotionBuffer promotions;
  std::vector<std::thread> agents;
  const int n_agents = cfg.hybrid ? std::max(1, cfg.heuristic_agents) : 0;
  for (int a = 0; a < n_agents; ++a) {
    agents.emplace_back([&, a] {
      std::uint64_t salt = cfg.rng_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(a + 1);
      while (!inbox.terminated.load()) {
        std::optional<Schedule> s = promotions.take();
        if (!s) return;
        SearchBudget bud;
        bud.max_seconds = cfg.heuristic_slice_s;
        Schedule improved = insertion_local_search(inst, *s, bud, salt++);
        pool.offer_schedule(improved);
      }
    });
  }

  const std::uint64_t steal_threshold =
      std::max<std::uint64_t>(1, (static_cast<std::uint64_t>(pool.K()) + 4) / 5);
  auto last_checkpoint = clock::time_point{};  // epoch: first snapshot fires immediately
  std::uint64_t nodes_at_last_snapshot = 0;
  bool pending_best = false;

  auto queue_best = [&]() -> bool {
    Outbox::Item item;
    item.is_best = true;
    item.best = pool.best_schedule();
    if (!item.best.evaluated()) return true;  // nothing to send
    if (outbox.try_put(std::move(item))) {
      ++res.bests_sent;
      return true;
    }
    return false;
  };
  auto queue_snapshot = [&]() -> bool {
    Outbox::Item item;
    item.is_best = false;
    item.snapshot = pool.snapshot_intervals();
    const std::uint64_t nodes = pool.stats().decomposed;
    item.nodes_delta = nodes - nodes_at_last_snapshot;
    if (outbox.try_put(std::move(item))) {
      nodes_at_last_snapshot = nodes;
      pool.reset_steal_mark();
      last_checkpoint = clock::now();
      ++res.checkpoints_sent;
      return true;
    }
    return false;
  };

  if (cfg.send_initial_best) {
    pending_best = true;
  }

  try {
    while (!inbox.terminated.load()) {
      if (std::optional<std::vector<Interval>> work = inbox.take_work()) {
        pool.apply_work_update(*work);
      }

      const int active = pool.run_round();

      if (!agents.empty()) {
        promotions.refill(pool.promote_solutions(2 * static_cast<int>(agents.size())),
                          2 * agents.size());
      }

      // Triggers, best-solution first.
      if (pool.improved_since_mark()) pending_best = true;
      if (pending_best && queue_best()) pending_best = false;

      const double since_cp =
          std::chrono::duration<double>(clock::now() - last_checkpoint).count();
      const bool want_snapshot = pool.steals_since_mark() >= steal_threshold ||
                                 since_cp >= cfg.checkpoint_period_s || active == 0;
      if (want_snapshot) queue_snapshot();

      if (active == 0) {
        // Exhausted: watch for updates, termination or the retry timer;
        // exploration work never blocks inside the network layer.
        if (std::optional<std::vector<Interval>> work = inbox.take_work()) {
          pool.apply_work_update(*work);
          continue;
        }
        const double since =
            std::chrono::duration<double>(clock::now() - last_checkpoint).count();
        if (since >= cfg.checkpoint_period_s) {
          if (pending_best && queue_best()) pending_best = false;
          queue_snapshot();
        }
        std::this_thread::sleep_for(std::chrono::microseconds(200));
      }
    }
  } catch (...) {
    inbox.terminate("worker pool role failed");
    outbox.close();
    promotions.close();
    comm.join();
    for (std::thread& t : agents) t.join();
    throw;
  }

  outbox.close();
  promotions.close();
  comm.join();
  for (std::thread& t : agents) t.join();

  res.local_best = pool.best_schedule();
  res.stats = pool.stats();
  pool.flush_timeline();

  std::string err;
  {
    // inbox.error is written before terminated is set; safe to read now
    err = inbox.error;
  }
  if (!err.empty()) throw TransportError(err);
  return res;
}

}  // namespace pbb
