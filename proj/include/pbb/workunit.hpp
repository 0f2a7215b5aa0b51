#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pbb/bigcount.hpp"

namespace pbb {

// Half-open interval [a, b) of leaf indices in [0, n!).
struct Interval {
  BigCount a;
  BigCount b;

  Interval() = default;
  Interval(BigCount lo, BigCount hi) : a(std::move(lo)), b(std::move(hi)) {}

  bool empty() const { return a >= b; }
  BigCount length() const { return empty() ? BigCount() : b - a; }
  friend bool operator==(const Interval& x, const Interval& y) { return x.a == y.a && x.b == y.b; }
};

// Sorted union of disjoint intervals plus bookkeeping: kmax caps how many
// intervals the owning worker can hold, modified marks coordinator-side
// edits since the worker last checkpointed.
struct WorkUnit {
  std::uint64_t id = 0;
  std::vector<Interval> intervals;
  std::uint32_t kmax = 0;
  bool modified = false;
};

// Canonical form: empties dropped, sorted by start, overlapping intervals
// merged. Exactly adjacent intervals are kept separate on purpose: worker
// side, interval identity lines up one-per-explorer and must survive the
// round trip. Throws if some interval has a > b.
std::vector<Interval> normalize(std::vector<Interval> intervals);

bool is_normalized(std::span<const Interval> intervals);

// Set intersection of two normalized interval lists, O(|A|+|B|) two-pointer
// merge of pairwise [max(a1,a2), min(b1,b2)) overlaps.
std::vector<Interval> intersect_units(std::span<const Interval> a, std::span<const Interval> b);

// Total number of leaves covered.
BigCount unit_size(std::span<const Interval> intervals);

// Take the right halves [floor((a+b)/2), b) of the victim's first
// min(kmax_requester, K_victim) intervals; intervals shorter than 2 are
// skipped. The victim keeps the left halves and is flagged modified when
// anything was taken. Returns the new unit (empty when nothing split).
WorkUnit split_unit(WorkUnit& victim, std::uint32_t kmax_requester, std::uint64_t new_id);

bool units_equal(std::span<const Interval> a, std::span<const Interval> b);

}  // namespace pbb
