#include "pbb/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace pbb {

void SearchBudget::validate() const {
  if (max_iterations == 0 && max_seconds <= 0) {
    throw std::invalid_argument("search budget needs an iteration or time bound");
  }
}

namespace {

// Best position to insert `job` into the partial schedule `sched`, with the
// makespan of every insertion evaluated in O(|sched| m) total: e holds
// prefix completion times, q suffix tails, f the candidate's completion
// when inserted at each slot.
struct InsertScan {
  std::vector<std::int64_t> e, q, f;

  // Returns {best position in 0..len, best makespan}; prefers the earliest
  // position on ties. If `values` is non-null it receives the makespan of
  // every insertion position.
  std::pair<int, std::int64_t> run(const Instance& inst, const std::vector<int>& sched, int len,
                                   int job, std::vector<std::int64_t>* values) {
    const int m = inst.m;
    e.assign(static_cast<std::size_t>(len + 1) * m, 0);
    q.assign(static_cast<std::size_t>(len + 2) * m, 0);
    f.assign(static_cast<std::size_t>(m), 0);
    for (int i = 1; i <= len; ++i) {
      const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(sched[static_cast<std::size_t>(i - 1)]) * m;
      std::int64_t* cur = &e[static_cast<std::size_t>(i) * m];
      const std::int64_t* prev = &e[static_cast<std::size_t>(i - 1) * m];
      cur[0] = prev[0] + row[0];
      for (int k = 1; k < m; ++k) cur[k] = std::max(cur[k - 1], prev[k]) + row[k];
    }
    for (int i = len; i >= 1; --i) {
      const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(sched[static_cast<std::size_t>(i - 1)]) * m;
      std::int64_t* cur = &q[static_cast<std::size_t>(i) * m];
      const std::int64_t* next = &q[static_cast<std::size_t>(i + 1) * m];
      cur[m - 1] = next[m - 1] + row[m - 1];
      for (int k = m - 2; k >= 0; --k) cur[k] = std::max(cur[k + 1], next[k]) + row[k];
    }
    const std::int32_t* jrow = inst.p.data() + static_cast<std::size_t>(job) * m;
    int best_pos = 0;
    std::int64_t best_val = INT64_MAX;
    if (values) values->assign(static_cast<std::size_t>(len + 1), 0);
    for (int pos = 0; pos <= len; ++pos) {
      const std::int64_t* prev = &e[static_cast<std::size_t>(pos) * m];
      f[0] = prev[0] + jrow[0];
      for (int k = 1; k < m; ++k) f[k] = std::max(f[static_cast<std::size_t>(k - 1)], prev[k]) + jrow[k];
      const std::int64_t* tail = &q[static_cast<std::size_t>(pos + 1) * m];
      std::int64_t val = 0;
      for (int k = 0; k < m; ++k) val = std::max(val, f[static_cast<std::size_t>(k)] + tail[k]);
      if (values) (*values)[static_cast<std::size_t>(pos)] = val;
      if (val < best_val) {
        best_val = val;
        best_pos = pos;
      }
    }
    return {best_pos, best_val};
  }
};

}  // namespace

Schedule neh(const Instance& inst) {
  inst.validate();
  const int n = inst.n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::int64_t> load(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < inst.m; ++k) load[static_cast<std::size_t>(j)] += inst.pt(j, k);
  }
  std::stable_sort(order.begin(), order.end(), [&load](int a, int b) {
    if (load[static_cast<std::size_t>(a)] != load[static_cast<std::size_t>(b)]) {
      return load[static_cast<std::size_t>(a)] > load[static_cast<std::size_t>(b)];
    }
    return a < b;
  });

  std::vector<int> sched;
  sched.reserve(static_cast<std::size_t>(n));
  InsertScan scan;
  std::int64_t last = 0;
  for (int step = 0; step < n; ++step) {
    const int job = order[static_cast<std::size_t>(step)];
    const auto [pos, val] = scan.run(inst, sched, static_cast<int>(sched.size()), job, nullptr);
    sched.insert(sched.begin() + pos, job);
    last = val;
  }
  Schedule out;
  out.perm = std::move(sched);
  out.cmax = last;
  return out;
}

Schedule insertion_local_search(const Instance& inst, const Schedule& seed, SearchBudget budget,
                                std::uint64_t rng_seed) {
  inst.validate();
  budget.validate();
  const int n = inst.n;
  Schedule cur;
  cur.perm = seed.perm;
  cur.cmax = makespan(inst, cur.perm);

  std::mt19937_64 rng(rng_seed);
  InsertScan scan;
  std::vector<std::int64_t> values;
  std::vector<int> reduced(static_cast<std::size_t>(n) - 1);
  std::vector<int> tie_pool;

  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t iterations = 0;
  auto budget_spent = [&] {
    if (budget.max_iterations > 0 && iterations >= budget.max_iterations) return true;
    if (budget.max_seconds > 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
      if (el.count() >= budget.max_seconds) return true;
    }
    return false;
  };

  bool improved = true;
  while (improved && !budget_spent()) {
    improved = false;
    for (int pos = 0; pos < n && !budget_spent(); ++pos) {
      const int job = cur.perm[static_cast<std::size_t>(pos)];
      reduced.assign(cur.perm.begin(), cur.perm.end());
      reduced.erase(reduced.begin() + pos);
      ++iterations;
      scan.run(inst, reduced, n - 1, job, &values);
      std::int64_t best = INT64_MAX;
      for (std::int64_t v : values) best = std::min(best, v);
      if (best >= cur.cmax) continue;
      tie_pool.clear();
      for (int i = 0; i <= n - 1; ++i) {
        if (values[static_cast<std::size_t>(i)] == best) tie_pool.push_back(i);
      }
      const int choice = tie_pool[std::uniform_int_distribution<std::size_t>(0, tie_pool.size() - 1)(rng)];
      reduced.insert(reduced.begin() + choice, job);
      cur.perm = reduced;
      cur.cmax = best;
      improved = true;
    }
  }
  return cur;
}

}  // namespace pbb
