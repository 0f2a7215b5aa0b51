#include "pbb/bound.hpp"

#include <algorithm>
#include <stdexcept>

namespace pbb {

void Subproblem::validate(const Instance& inst) const {
  if (n() != inst.n) throw std::invalid_argument("subproblem size does not match instance");
  if (d1 < 0 || d2 < 0 || d1 + d2 > n()) throw std::invalid_argument("bad subproblem depths");
  std::vector<char> seen(static_cast<std::size_t>(n()), 0);
  for (int j : perm) {
    if (j < 0 || j >= n() || seen[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("subproblem perm is not a permutation");
    }
    seen[static_cast<std::size_t>(j)] = 1;
  }
}

void bound_tables(const Instance& inst, const Subproblem& sub, BoundTables& out) {
  const int m = inst.m;
  const int n = sub.n();
  out.resize(m);

  // Front: completion times of sigma1 on each machine via the makespan
  // recursion.
  for (int i = 0; i < sub.d1; ++i) {
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(sub.perm[i]) * m;
    out.front[0] += row[0];
    for (int k = 1; k < m; ++k) out.front[k] = std::max(out.front[k], out.front[k - 1]) + row[k];
  }

  // Tail: schedule sigma2 in reverse order on reversed machine order;
  // tail[k] is the minimal time between starting the first suffix job on
  // machine k and finishing on the last machine.
  for (int i = n - 1; i >= n - sub.d2; --i) {
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(sub.perm[i]) * m;
    out.tail[m - 1] += row[m - 1];
    for (int k = m - 2; k >= 0; --k) out.tail[k] = std::max(out.tail[k], out.tail[k + 1]) + row[k];
  }

  for (int i = sub.d1; i < n - sub.d2; ++i) {
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(sub.perm[i]) * m;
    for (int k = 0; k < m; ++k) out.remain[k] += row[k];
  }
}

BoundTables bound_tables(const Instance& inst, const Subproblem& sub) {
  BoundTables t;
  bound_tables(inst, sub, t);
  return t;
}

std::int64_t lb1(const Instance& inst, const Subproblem& sub) {
  BoundTables t = bound_tables(inst, sub);
  std::int64_t best = 0;
  for (int k = 0; k < inst.m; ++k) best = std::max(best, t.front[k] + t.remain[k] + t.tail[k]);
  return best;
}

void children_bounds(const Instance& inst, const Subproblem& sub, const BoundTables& tables,
                     std::span<std::int64_t> lb_fwd, std::span<std::int64_t> lb_bwd) {
  const int m = inst.m;
  const int f = sub.free_count();
  if (f < 1) throw std::invalid_argument("children_bounds: no free jobs");
  if (lb_fwd.size() != static_cast<std::size_t>(f) || lb_bwd.size() != static_cast<std::size_t>(f)) {
    throw std::invalid_argument("children_bounds: output span size mismatch");
  }
  for (int c = 0; c < f; ++c) {
    const int j = sub.perm[sub.d1 + c];
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(j) * m;

    std::int64_t prev = 0, best = 0;
    for (int k = 0; k < m; ++k) {
      prev = std::max(prev, tables.front[k]) + row[k];
      best = std::max(best, prev + (tables.remain[k] - row[k]) + tables.tail[k]);
    }
    lb_fwd[static_cast<std::size_t>(c)] = best;

    prev = 0;
    best = 0;
    for (int k = m - 1; k >= 0; --k) {
      prev = std::max(prev, tables.tail[k]) + row[k];
      best = std::max(best, tables.front[k] + (tables.remain[k] - row[k]) + prev);
    }
    lb_bwd[static_cast<std::size_t>(c)] = best;
  }
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> children_bounds(
    const Instance& inst, const Subproblem& sub, const BoundTables& tables) {
  const std::size_t f = static_cast<std::size_t>(sub.free_count());
  std::vector<std::int64_t> fwd(f), bwd(f);
  children_bounds(inst, sub, tables, fwd, bwd);
  return {std::move(fwd), std::move(bwd)};
}

void decompose(const Instance& inst, const Subproblem& sub, std::int64_t incumbent,
               BoundScratch& scratch, Decomposition& out) {
  const int f = sub.free_count();
  if (f < 1) throw std::invalid_argument("decompose: no free jobs");
  if (incumbent <= 0) throw std::invalid_argument("decompose: incumbent must be positive");

  bound_tables(inst, sub, scratch.tables);
  scratch.lb_fwd.resize(static_cast<std::size_t>(f));
  scratch.lb_bwd.resize(static_cast<std::size_t>(f));
  children_bounds(inst, sub, scratch.tables, scratch.lb_fwd, scratch.lb_bwd);

  std::int64_t lo = INT64_MAX;
  for (int c = 0; c < f; ++c) {
    lo = std::min({lo, scratch.lb_fwd[static_cast<std::size_t>(c)],
                   scratch.lb_bwd[static_cast<std::size_t>(c)]});
  }
  int count_fwd = 0, count_bwd = 0;
  std::int64_t sum_fwd = 0, sum_bwd = 0;
  for (int c = 0; c < f; ++c) {
    const std::int64_t a = scratch.lb_fwd[static_cast<std::size_t>(c)];
    const std::int64_t b = scratch.lb_bwd[static_cast<std::size_t>(c)];
    count_fwd += a == lo;
    count_bwd += b == lo;
    sum_fwd += a;
    sum_bwd += b;
  }

  if (count_fwd != count_bwd) {
    out.direction = count_fwd < count_bwd ? BranchDir::Forward : BranchDir::Backward;
  } else if (sum_fwd != sum_bwd) {
    out.direction = sum_fwd > sum_bwd ? BranchDir::Forward : BranchDir::Backward;
  } else {
    out.direction = BranchDir::Forward;
  }

  const auto& chosen = out.direction == BranchDir::Forward ? scratch.lb_fwd : scratch.lb_bwd;
  out.child_lb.assign(chosen.begin(), chosen.end());
  out.pruned.resize(static_cast<std::size_t>(f));
  for (int c = 0; c < f; ++c) {
    out.pruned[static_cast<std::size_t>(c)] = chosen[static_cast<std::size_t>(c)] >= incumbent;
  }
}

Decomposition decompose(const Instance& inst, const Subproblem& sub, std::int64_t incumbent) {
  BoundScratch scratch;
  Decomposition out;
  decompose(inst, sub, incumbent, scratch, out);
  return out;
}

}  // namespace pbb
