#include "pbb/coordinator.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pbb {

namespace {

std::string fingerprint_hex(const Instance& inst) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(instance_fingerprint(inst)));
  return buf;
}

}  // namespace

void checkpoint_save(const std::string& path, const Instance& inst, const CheckpointData& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << "pbb-checkpoint 1\n";
    out << "instance " << inst.n << ' ' << inst.m << ' ' << fingerprint_hex(inst) << '\n';
    out << "best ";
    if (data.best_value == kNoIncumbent) {
      out << "- 0\n";
    } else {
      out << data.best_value << ' ' << data.best_schedule.size();
      for (int j : data.best_schedule) out << ' ' << j;
      out << '\n';
    }
    out << "nodes " << data.total_nodes << '\n';
    out << "units " << data.units.size() << '\n';
    for (const WorkUnit& u : data.units) {
      out << "unit " << u.kmax << ' ' << u.intervals.size() << '\n';
      for (const Interval& iv : u.intervals) out << iv.a.str() << ' ' << iv.b.str() << '\n';
    }
    out << "end\n";
    out.flush();
    if (!out) throw std::runtime_error("checkpoint write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("checkpoint rename failed: " + path);
  }
}

CheckpointData checkpoint_load(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "pbb-checkpoint" || version != 1) {
    throw std::runtime_error("not a recognized checkpoint file: " + path);
  }
  int n = 0, m = 0;
  std::string fp;
  if (!(in >> word >> n >> m >> fp) || word != "instance") {
    throw std::runtime_error("checkpoint missing instance header");
  }
  if (n != inst.n || m != inst.m || fp != fingerprint_hex(inst)) {
    throw std::runtime_error("checkpoint belongs to a different instance");
  }
  CheckpointData data;
  std::string best_tok;
  std::size_t sched_len = 0;
  if (!(in >> word >> best_tok >> sched_len) || word != "best") {
    throw std::runtime_error("checkpoint missing best line");
  }
  if (best_tok != "-") data.best_value = std::stoll(best_tok);
  data.best_schedule.resize(sched_len);
  for (std::size_t i = 0; i < sched_len; ++i) {
    if (!(in >> data.best_schedule[i])) throw std::runtime_error("checkpoint best schedule truncated");
  }
  if (!(in >> word >> data.total_nodes) || word != "nodes") {
    throw std::runtime_error("checkpoint missing nodes line");
  }
  std::size_t nunits = 0;
  if (!(in >> word >> nunits) || word != "units") {
    throw std::runtime_error("checkpoint missing units line");
  }
  for (std::size_t u = 0; u < nunits; ++u) {
    WorkUnit unit;
    std::size_t count = 0;
    if (!(in >> word >> unit.kmax >> count) || word != "unit") {
      throw std::runtime_error("checkpoint unit header malformed");
    }
    std::string a, b;
    for (std::size_t i = 0; i < count; ++i) {
      if (!(in >> a >> b)) throw std::runtime_error("checkpoint interval truncated");
      unit.intervals.emplace_back(BigCount(a), BigCount(b));
    }
    unit.intervals = normalize(std::move(unit.intervals));
    data.units.push_back(std::move(unit));
  }
  if (!(in >> word) || word != "end") throw std::runtime_error("checkpoint missing end marker");
  return data;
}

Coordinator::Coordinator(const Instance& inst, CoordinatorConfig cfg)
    : inst_(inst), cfg_(std::move(cfg)) {
  inst_.validate();
  best_value_ = cfg_.initial_ub;
  if (!cfg_.initial_schedule.empty()) {
    const std::int64_t mk = makespan(inst_, cfg_.initial_schedule);
    if (mk <= best_value_ || best_value_ == kNoIncumbent) {
      best_value_ = mk;
      best_schedule_ = cfg_.initial_schedule;
    }
  }
}

void Coordinator::add_initial_interval() {
  add_initial_unit({Interval(BigCount(0), BigCount::factorial(inst_.n))});
}

void Coordinator::add_initial_unit(std::vector<Interval> intervals) {
  WorkUnit u;
  u.id = next_id_++;
  u.intervals = normalize(std::move(intervals));
  if (u.intervals.empty()) return;
  unassigned_.push_back(std::move(u));
}

void Coordinator::restore(const std::string& checkpoint_path) {
  CheckpointData data = checkpoint_load(checkpoint_path, inst_);
  for (WorkUnit& u : data.units) {
    u.id = next_id_++;
    if (!u.intervals.empty()) unassigned_.push_back(std::move(u));
  }
  if (data.best_value < best_value_) {
    best_value_ = data.best_value;
    best_schedule_ = data.best_schedule;
  }
  total_nodes_ += data.total_nodes;
}

CheckpointData Coordinator::snapshot() const {
  CheckpointData data;
  data.best_value = best_value_;
  data.best_schedule = best_schedule_;
  data.total_nodes = total_nodes_;
  for (const WorkUnit& u : unassigned_) data.units.push_back(u);
  for (const auto& [id, u] : active_) data.units.push_back(u);
  return data;
}

void Coordinator::save_now() {
  if (!cfg_.checkpoint_path.empty()) checkpoint_save(cfg_.checkpoint_path, inst_, snapshot());
}

std::vector<Interval> Coordinator::take_from_unassigned(std::uint32_t kmax) {
  if (unassigned_.empty() || kmax == 0) return {};
  WorkUnit& front = unassigned_.front();
  std::vector<Interval> out;
  if (front.intervals.size() <= kmax) {
    out = std::move(front.intervals);
    unassigned_.erase(unassigned_.begin());
  } else {
    out.assign(front.intervals.begin(), front.intervals.begin() + kmax);
    front.intervals.erase(front.intervals.begin(), front.intervals.begin() + kmax);
  }
  return out;
}

std::vector<Interval> Coordinator::steal_from_active(std::uint32_t kmax) {
  if (active_.empty() || kmax == 0) return {};
  std::uint64_t victim_id = 0;
  BigCount victim_size;
  bool found = false;
  for (const auto& [id, unit] : active_) {
    const BigCount size = unit_size(unit.intervals);
    if (!found || size > victim_size) {
      found = true;
      victim_id = id;
      victim_size = size;
    }
  }
  WorkUnit fresh = split_unit(active_[victim_id], kmax, next_id_++);
  if (fresh.intervals.empty()) return {};
  ++splits_;
  return std::move(fresh.intervals);
}

Coordinator::Reply Coordinator::worker_checkpoint(int key, const WorkRequest& req) {
  std::vector<Interval> wi(req.intervals);
  wi = normalize(std::move(wi));

  std::vector<Interval> wtmp;
  const auto owned = owned_.find(key);
  if (owned != owned_.end()) {
    const WorkUnit& copy = active_.at(owned->second);
    wtmp = copy.modified ? intersect_units(wi, copy.intervals) : wi;
  }

  if (unit_size(wtmp).is_zero()) {
    if (owned != owned_.end()) {
      active_.erase(owned->second);
      owned_.erase(owned);
    }
    wtmp = take_from_unassigned(req.kmax);
    if (wtmp.empty()) wtmp = steal_from_active(req.kmax);
    if (!wtmp.empty()) {
      WorkUnit copy;
      copy.id = next_id_++;
      copy.kmax = req.kmax;
      copy.intervals = wtmp;
      owned_[key] = copy.id;
      active_[copy.id] = std::move(copy);
    }
  } else {
    WorkUnit& copy = active_.at(owned->second);
    copy.intervals = wtmp;
    copy.kmax = req.kmax;
    copy.modified = false;
  }

  if (wtmp.empty() && lists_empty()) return {ReplyKind::End, {}};
  if (!units_equal(wtmp, wi)) return {ReplyKind::Work, std::move(wtmp)};
  return {ReplyKind::Best, {}};
}

void Coordinator::record_best(std::uint64_t mk, const std::vector<std::uint32_t>& schedule) {
  if (mk == kNoMakespan) return;
  const std::int64_t value = static_cast<std::int64_t>(mk);
  if (value >= best_value_) return;
  if (!schedule.empty()) {
    std::vector<int> perm(schedule.begin(), schedule.end());
    if (makespan(inst_, perm) != value) {
      throw std::runtime_error("worker reported a schedule that does not match its makespan");
    }
    best_schedule_ = std::move(perm);
  }
  best_value_ = value;
}

CoordinatorResult Coordinator::run(CoordinatorTransport& transport) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto last_ckpt = t0;
  save_now();

  CoordinatorResult res;
  int n_terminated = 0;
  const int n_workers = transport.worker_count();
  while (n_terminated < n_workers) {
    std::pair<int, Message> incoming;
    try {
      incoming = transport.receive();
    } catch (const TransportError&) {
      if (!killed_) save_now();
      throw;
    }
    ++res.messages;
    const int src = incoming.first;
    auto wire_best = [this]() -> std::uint64_t {
      return best_value_ == kNoIncumbent ? kNoMakespan : static_cast<std::uint64_t>(best_value_);
    };
    if (const auto* req = std::get_if<WorkRequest>(&incoming.second)) {
      total_nodes_ += req->nodes_since_checkpoint;
      Reply rep = worker_checkpoint(src, *req);
      switch (rep.kind) {
        case ReplyKind::Work:
          transport.send(src, WorkReply{std::move(rep.intervals)});
          break;
        case ReplyKind::Best:
          transport.send(src, BestMsg{wire_best(), {}});
          break;
        case ReplyKind::End:
          transport.send(src, EndMsg{wire_best(), {}});
          break;
      }
    } else if (const auto* best = std::get_if<BestMsg>(&incoming.second)) {
      record_best(best->makespan, best->schedule);
      transport.send(src, BestMsg{wire_best(), {}});
    } else if (const auto* end = std::get_if<EndMsg>(&incoming.second)) {
      record_best(end->makespan, end->schedule);
      ++n_terminated;  // final message of this worker, not answered
    } else {
      throw std::runtime_error("coordinator received a coordinator-side message");
    }

    if (!cfg_.checkpoint_path.empty()) {
      const auto now = clock::now();
      const std::chrono::duration<double> since = now - last_ckpt;
      if (since.count() >= cfg_.checkpoint_period_s) {
        save_now();
        last_ckpt = now;
      }
    }
  }
  save_now();

  const std::chrono::duration<double> wall = clock::now() - t0;
  res.best_value = best_value_;
  res.best.perm = best_schedule_;
  res.best.cmax = best_schedule_.empty() ? -1 : best_value_;
  res.total_nodes = total_nodes_;
  res.splits = splits_;
  res.wall_s = wall.count();
  return res;
}

}  // namespace pbb
