#include "pbb/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace pbb {

namespace {

std::int64_t evaluate_complete(const Instance& inst, const Subproblem& sub,
                               std::vector<std::int64_t>& work) {
  work.assign(static_cast<std::size_t>(inst.m), 0);
  for (int j : sub.perm) {
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(j) * inst.m;
    work[0] += row[0];
    for (int k = 1; k < inst.m; ++k) work[k] = std::max(work[k], work[k - 1]) + row[k];
  }
  return work[static_cast<std::size_t>(inst.m) - 1];
}

int default_explorers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(hw == 0 ? 2 : 2 * hw);
}

bool power_of_four(int k) {
  if (k < 4) return false;
  while (k % 4 == 0) k /= 4;
  return k == 1;
}

}  // namespace

StepOutcome explore_step(Ivm& ivm, const Instance& inst, std::int64_t prune_bound,
                         std::int64_t improve_bound, BoundScratch& scratch, Decomposition& dec,
                         std::uint64_t& decomposed, std::uint64_t& leaves, Schedule* improved,
                         std::vector<std::uint64_t>* census) {
  if (!ivm.select_next()) return StepOutcome::Exhausted;
  if (ivm.free_count() <= 1) {
    // One free job or none: the decoded node is a complete schedule.
    ivm.decode(scratch.sub);
    const std::int64_t mk = evaluate_complete(inst, scratch.sub, scratch.row);
    ++leaves;
    if (census) census->push_back(ivm.position_u64());
    ivm.prune_current();
    if (mk < improve_bound) {
      if (improved) {
        improved->perm = scratch.sub.perm;
        improved->cmax = mk;
      }
      return StepOutcome::ImprovedBest;
    }
    return StepOutcome::Decomposed;
  }
  ivm.decode(scratch.sub);
  decompose(inst, scratch.sub, prune_bound, scratch, dec);
  ivm.branch(dec);
  ++decomposed;
  return StepOutcome::Decomposed;
}

std::pair<Interval, Interval> steal_right_half(const Interval& iv) {
  if (iv.length() < BigCount(2)) throw std::invalid_argument("interval too small to steal from");
  BigCount mid = (iv.a + iv.b).half();
  return {Interval(iv.a, mid), Interval(mid, iv.b)};
}

// Timeline rows: timestamp_ms, explorer_id, active(0/1), interval_length_log2.
class TimelineWriter {
 public:
  explicit TimelineWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open timeline file: " + path);
    out_ << "timestamp_ms,explorer_id,active,interval_length_log2\n";
  }
  void row(std::int64_t ts_ms, int id, bool active, long log2_len) {
    out_ << ts_ms << ',' << id << ',' << (active ? 1 : 0) << ',' << log2_len << '\n';
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

ExplorerPool::ExplorerPool(const Instance& inst, PoolConfig cfg) : inst_(inst), cfg_(cfg) {
  inst_.validate();
  int k = cfg_.explorers > 0 ? cfg_.explorers : default_explorers();
  slots_.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) slots_.push_back(std::make_unique<Slot>(inst_.n));
  if (cfg_.threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    cfg_.threads = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, static_cast<unsigned>(k)));
  }
  if (cfg_.min_steal_len.is_zero()) {
    const std::uint64_t div = static_cast<std::uint64_t>(4) * static_cast<std::uint64_t>(k);
    BigCount quarter = (BigCount::factorial(inst_.n) + BigCount(div - 1)) / div;
    if (quarter.is_zero()) quarter = BigCount(1);
    min_steal_len_ = std::min(BigCount(40320), quarter);  // 8!
  } else {
    min_steal_len_ = cfg_.min_steal_len;
  }
  if (!cfg_.timeline_path.empty()) timeline_ = std::make_unique<TimelineWriter>(cfg_.timeline_path);
  start_ = std::chrono::steady_clock::now();
}

std::int64_t ExplorerPool::prune_bound() const {
  return cfg_.disable_pruning ? kNoIncumbent : best_value_.load(std::memory_order_relaxed);
}

void ExplorerPool::set_initial_bound(std::int64_t ub, std::span<const int> sched) {
  std::scoped_lock lk(best_mu_);
  best_value_.store(ub, std::memory_order_relaxed);
  improvement_mark_ = ub;
  if (!sched.empty()) {
    best_sched_.assign(sched.begin(), sched.end());
    best_sched_value_ = ub;
  }
}

void ExplorerPool::init_slot(Slot& slot, const Interval& iv) {
  if (iv.empty()) return;
  const BigCount nfact = BigCount::factorial(inst_.n);
  if (iv.b > nfact) throw std::invalid_argument("interval beyond n!");
  const Factoradic a = from_decimal(iv.a, inst_.n);
  std::optional<Factoradic> b;
  if (iv.b < nfact) b = from_decimal(iv.b, inst_.n);
  slot.ivm.init_at(a, b, iv.b, inst_, prune_bound(), slot.scratch, &slot.decomposed);
  ++intervals_initialized_;
}

void ExplorerPool::assign_fresh(std::span<const Interval> intervals) {
  if (active_count() != 0) throw std::logic_error("assign_fresh on a non-idle pool");
  if (intervals.size() > static_cast<std::size_t>(K())) {
    throw std::invalid_argument("more intervals than explorers");
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) init_slot(*slots_[i], intervals[i]);
}

namespace {

// A minus B for normalized interval lists.
std::vector<Interval> subtract_units(std::span<const Interval> a, std::span<const Interval> b) {
  std::vector<Interval> out;
  for (const Interval& iv : a) {
    BigCount cursor = iv.a;
    for (const Interval& c : b) {
      if (c.b <= cursor) continue;
      if (c.a >= iv.b) break;
      if (c.a > cursor) out.emplace_back(cursor, c.a);
      cursor = c.b;
      if (cursor >= iv.b) break;
    }
    if (cursor < iv.b) out.emplace_back(cursor, iv.b);
  }
  return out;
}

}  // namespace

void ExplorerPool::apply_work_update(std::span<const Interval> update) {
  if (update.size() > static_cast<std::size_t>(K())) {
    throw std::invalid_argument("work update holds more intervals than explorers");
  }
  std::vector<Interval> incoming(update.begin(), update.end());
  incoming = normalize(std::move(incoming));

  // The coordinator replies relative to our last snapshot, which the pool
  // has explored past in the meantime; only the part intersecting the
  // current remaining work is adopted. An explorer whose interval merely
  // shrank on the right keeps its search state; anything reshaped is
  // re-seated from scratch.
  std::vector<Interval> kept;
  for (int i = 0; i < K(); ++i) {
    Slot& slot = *slots_[i];
    if (slot.ivm.state() != Ivm::State::Active) continue;
    const BigCount pos = to_decimal(slot.ivm.position());
    const Interval span(pos, slot.ivm.end_dec());
    std::vector<Interval> mine = intersect_units(incoming, std::span<const Interval>(&span, 1));
    if (mine.size() == 1 && mine[0].a == span.a) {
      if (mine[0].b < span.b) slot.ivm.shrink_end(from_decimal(mine[0].b, inst_.n), mine[0].b);
      kept.push_back(std::move(mine[0]));
    } else {
      slot.ivm = Ivm(inst_.n);
    }
  }
  kept = normalize(std::move(kept));
  std::vector<Interval> to_place = subtract_units(incoming, kept);

  std::vector<int> idle;
  for (int i = 0; i < K(); ++i) {
    if (slots_[i]->ivm.state() != Ivm::State::Active) idle.push_back(i);
  }
  if (to_place.size() > idle.size()) {
    throw std::runtime_error("work update fragments exceed explorer capacity");
  }
  for (std::size_t i = 0; i < to_place.size(); ++i) init_slot(*slots_[idle[i]], to_place[i]);
}

void ExplorerPool::run_batch(Slot& slot) {
  Schedule improved;
  for (int s = 0; s < cfg_.batch_steps; ++s) {
    const std::int64_t improve = best_value_.load(std::memory_order_relaxed);
    const std::int64_t prune = cfg_.disable_pruning ? kNoIncumbent : improve;
    const StepOutcome out =
        explore_step(slot.ivm, inst_, prune, improve, slot.scratch, slot.dec, slot.decomposed,
                     slot.leaves, &improved, cfg_.record_census ? &slot.census : nullptr);
    if (out == StepOutcome::Exhausted) break;
    if (out == StepOutcome::ImprovedBest) {
      std::scoped_lock lk(best_mu_);
      if (improved.cmax < best_value_.load(std::memory_order_relaxed)) {
        best_value_.store(improved.cmax, std::memory_order_relaxed);
        improvements_.fetch_add(1, std::memory_order_relaxed);
      }
      if (improved.cmax < best_sched_value_) {
        best_sched_ = improved.perm;
        best_sched_value_ = improved.cmax;
      }
    }
  }
}

int ExplorerPool::run_round() {
  std::vector<int> active;
  for (int i = 0; i < K(); ++i) {
    if (slots_[i]->ivm.state() == Ivm::State::Active) active.push_back(i);
  }
  if (!active.empty()) {
    const int nthreads = std::min<int>(cfg_.threads, static_cast<int>(active.size()));
    if (nthreads <= 1) {
      for (int i : active) run_batch(*slots_[i]);
    } else {
      std::atomic<std::size_t> cursor{0};
      auto work = [&] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
          if (i >= active.size()) return;
          run_batch(*slots_[active[i]]);
        }
      };
      std::vector<std::thread> team;
      team.reserve(static_cast<std::size_t>(nthreads) - 1);
      for (int t = 1; t < nthreads; ++t) team.emplace_back(work);
      work();
      for (auto& th : team) th.join();
    }
  }

  int now_active = active_count();
  if (now_active * 5 < K() * 4) {  // activity below 0.8 K
    steal_phase();
    now_active = active_count();
  }
  sample_timeline(now_active == 0);
  return now_active;
}

int ExplorerPool::active_count() const {
  int c = 0;
  for (const auto& s : slots_) c += s->ivm.state() == Ivm::State::Active;
  return c;
}

bool ExplorerPool::do_steal(int victim, int thief) {
  Slot& v = *slots_[victim];
  Slot& t = *slots_[thief];
  const Factoradic pos = v.ivm.position();
  const BigCount pos_dec = to_decimal(pos);
  if (v.ivm.end_dec() < pos_dec + BigCount(2)) return false;
  const Factoradic mid = midpoint(pos, v.ivm.end_fact());
  const BigCount mid_dec = to_decimal(mid);
  const std::optional<Factoradic> old_end = v.ivm.end_fact();
  const BigCount old_end_dec = v.ivm.end_dec();
  v.ivm.shrink_end(mid, mid_dec);
  t.ivm.init_at(mid, old_end, old_end_dec, inst_, prune_bound(), t.scratch, &t.decomposed);
  ++intervals_initialized_;
  ++local_steals_;
  ++steals_since_mark_;
  return true;
}

void ExplorerPool::steal_phase() {
  ++steal_phases_;
  const int k = K();
  std::vector<BigCount> len(static_cast<std::size_t>(k));
  BigCount total;
  for (int i = 0; i < k; ++i) {
    len[static_cast<std::size_t>(i)] = slots_[i]->ivm.remaining_length();
    total += len[static_cast<std::size_t>(i)];
  }
  BigCount avg = total;
  avg /= static_cast<std::uint64_t>(k);

  std::vector<char> claimed(static_cast<std::size_t>(k), 0);
  std::vector<char> satisfied(static_cast<std::size_t>(k), 0);
  auto eligible = [&](int v) {
    return slots_[v]->ivm.state() == Ivm::State::Active && !claimed[static_cast<std::size_t>(v)] &&
           len[static_cast<std::size_t>(v)] > avg && len[static_cast<std::size_t>(v)] > min_steal_len_;
  };
  std::vector<std::pair<int, int>> pairs;  // victim, thief

  if (power_of_four(k)) {
    int c = 0;
    for (int t = k; t > 1; t /= 4) ++c;
    std::int64_t stride = 1;
    for (int digit = 1; digit <= c; ++digit, stride *= 4) {
      for (int j = 1; j <= 3; ++j) {
        for (int thief = 0; thief < k; ++thief) {
          if (slots_[thief]->ivm.state() == Ivm::State::Active ||
              satisfied[static_cast<std::size_t>(thief)]) {
            continue;
          }
          const int d = static_cast<int>((thief / stride) % 4);
          const int nd = ((d - j) % 4 + 4) % 4;
          const int victim = thief + static_cast<int>((nd - d) * stride);
          if (!eligible(victim)) continue;
          claimed[static_cast<std::size_t>(victim)] = 1;
          satisfied[static_cast<std::size_t>(thief)] = 1;
          pairs.emplace_back(victim, thief);
        }
      }
    }
  } else {
    for (int thief = 0; thief < k; ++thief) {
      if (slots_[thief]->ivm.state() == Ivm::State::Active) continue;
      int best = -1;
      for (int v = 0; v < k; ++v) {
        if (!eligible(v)) continue;
        if (best < 0 || len[static_cast<std::size_t>(v)] > len[static_cast<std::size_t>(best)]) {
          best = v;
        }
      }
      if (best < 0) continue;
      claimed[static_cast<std::size_t>(best)] = 1;
      pairs.emplace_back(best, thief);
    }
  }
  for (const auto& [victim, thief] : pairs) do_steal(victim, thief);
}

std::vector<Interval> ExplorerPool::snapshot_intervals() const {
  std::vector<Interval> out;
  for (const auto& s : slots_) {
    if (s->ivm.state() != Ivm::State::Active) continue;
    const BigCount pos = to_decimal(s->ivm.position());
    if (pos < s->ivm.end_dec()) out.emplace_back(pos, s->ivm.end_dec());
  }
  return normalize(std::move(out));
}

std::int64_t ExplorerPool::best_value() const {
  return best_value_.load(std::memory_order_relaxed);
}

Schedule ExplorerPool::best_schedule() const {
  std::scoped_lock lk(best_mu_);
  Schedule s;
  s.perm = best_sched_;
  s.cmax = best_sched_.empty() ? -1 : best_sched_value_;
  return s;
}

void ExplorerPool::offer_bound(std::int64_t value) {
  std::scoped_lock lk(best_mu_);
  if (value < best_value_.load(std::memory_order_relaxed)) {
    best_value_.store(value, std::memory_order_relaxed);
  }
}

bool ExplorerPool::offer_schedule(const Schedule& cand) {
  if (cand.perm.empty() || cand.cmax < 0) return false;
  std::scoped_lock lk(best_mu_);
  bool took = false;
  if (cand.cmax < best_value_.load(std::memory_order_relaxed)) {
    best_value_.store(cand.cmax, std::memory_order_relaxed);
    improvements_.fetch_add(1, std::memory_order_relaxed);
    took = true;
  }
  if (cand.cmax < best_sched_value_) {
    best_sched_ = cand.perm;
    best_sched_value_ = cand.cmax;
    took = true;
  }
  return took;
}

bool ExplorerPool::improved_since_mark() {
  std::scoped_lock lk(best_mu_);
  if (best_sched_value_ < improvement_mark_) {
    improvement_mark_ = best_sched_value_;
    return true;
  }
  return false;
}

std::vector<Schedule> ExplorerPool::promote_solutions(int capacity) {
  std::vector<Schedule> out;
  std::vector<int> incumbent;
  {
    std::scoped_lock lk(best_mu_);
    incumbent = best_sched_;
  }
  if (incumbent.empty() || capacity <= 0) return out;
  std::vector<int> rank(incumbent.size());
  for (std::size_t i = 0; i < incumbent.size(); ++i) {
    rank[static_cast<std::size_t>(incumbent[i])] = static_cast<int>(i);
  }
  Subproblem sub;
  std::vector<std::int64_t> work;
  for (const auto& s : slots_) {
    if (s->ivm.state() != Ivm::State::Active) continue;
    s->ivm.decode(sub);
    std::sort(sub.perm.begin() + sub.d1, sub.perm.end() - sub.d2,
              [&rank](int a, int b) { return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]; });
    Schedule cand;
    cand.perm = sub.perm;
    cand.cmax = evaluate_complete(inst_, sub, work);
    out.push_back(std::move(cand));
  }
  std::sort(out.begin(), out.end(), [](const Schedule& a, const Schedule& b) { return a.cmax < b.cmax; });
  if (static_cast<int>(out.size()) > capacity) out.resize(static_cast<std::size_t>(capacity));
  return out;
}

PoolStats ExplorerPool::stats() const {
  PoolStats st;
  for (const auto& s : slots_) {
    st.decomposed += s->decomposed;
    st.leaves += s->leaves;
  }
  st.improvements = improvements_.load(std::memory_order_relaxed);
  st.local_steals = local_steals_;
  st.steal_phases = steal_phases_;
  st.intervals_initialized = intervals_initialized_;
  return st;
}

std::vector<std::uint64_t> ExplorerPool::take_census() {
  std::vector<std::uint64_t> all;
  for (auto& s : slots_) {
    all.insert(all.end(), s->census.begin(), s->census.end());
    s->census.clear();
  }
  return all;
}

void ExplorerPool::sample_timeline(bool force) {
  if (!timeline_) return;
  static constexpr auto kMinGap = std::chrono::milliseconds(50);
  const auto now = std::chrono::steady_clock::now();
  if (!force && now - last_sample_ < kMinGap) return;
  last_sample_ = now;
  const auto ts = std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
  for (int i = 0; i < K(); ++i) {
    const bool active = slots_[i]->ivm.state() == Ivm::State::Active;
    long lg = -1;
    if (active) {
      const BigCount rem = slots_[i]->ivm.remaining_length();
      lg = rem.is_zero() ? -1 : static_cast<long>(rem.bit_length()) - 1;
    }
    timeline_->row(ts, i, active, lg);
  }
}

void ExplorerPool::flush_timeline() {
  if (timeline_) {
    sample_timeline(true);
    timeline_->flush();
  }
}

PoolResult pool_run(const Instance& inst, std::int64_t initial_ub,
                    std::span<const Interval> intervals, const PoolConfig& cfg) {
  ExplorerPool pool(inst, cfg);
  pool.set_initial_bound(initial_ub, {});
  std::vector<Interval> init(intervals.begin(), intervals.end());
  if (init.empty()) init.emplace_back(BigCount(0), BigCount::factorial(inst.n));
  pool.assign_fresh(normalize(std::move(init)));

  const auto t0 = std::chrono::steady_clock::now();
  PoolResult res;
  res.stats.completed = true;
  while (pool.run_round() > 0) {
    if (cfg.time_limit_s > 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
      if (el.count() >= cfg.time_limit_s) {
        res.stats.completed = false;
        break;
      }
    }
  }
  pool.flush_timeline();
  const std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
  const PoolStats st = pool.stats();
  res.best = pool.best_schedule();
  res.best_value = pool.best_value();
  res.stats.decomposed = st.decomposed;
  res.stats.leaves = st.leaves;
  res.stats.improvements = st.improvements;
  res.stats.local_steals = st.local_steals;
  res.stats.steal_phases = st.steal_phases;
  res.stats.intervals_initialized = st.intervals_initialized;
  res.stats.wall_s = el.count();
  res.census = pool.take_census();
  return res;
}

}  // namespace pbb
