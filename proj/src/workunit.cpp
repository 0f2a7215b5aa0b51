#include "pbb/workunit.hpp"

#include <algorithm>
#include <stdexcept>

namespace pbb {

std::vector<Interval> normalize(std::vector<Interval> intervals) {
  for (const Interval& iv : intervals) {
    if (iv.a > iv.b) throw std::invalid_argument("interval with a > b");
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.empty(); });
  std::sort(intervals.begin(), intervals.end(), [](const Interval& x, const Interval& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<Interval> out;
  out.reserve(intervals.size());
  for (Interval& iv : intervals) {
    if (!out.empty() && iv.a < out.back().b) {
      if (iv.b > out.back().b) out.back().b = std::move(iv.b);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

bool is_normalized(std::span<const Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].empty()) return false;
    if (i > 0 && intervals[i].a < intervals[i - 1].b) return false;
  }
  return true;
}

std::vector<Interval> intersect_units(std::span<const Interval> a, std::span<const Interval> b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const BigCount& lo = a[i].a > b[j].a ? a[i].a : b[j].a;
    const BigCount& hi = a[i].b < b[j].b ? a[i].b : b[j].b;
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].b <= b[j].b) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

BigCount unit_size(std::span<const Interval> intervals) {
  BigCount total;
  for (const Interval& iv : intervals) total += iv.length();
  return total;
}

WorkUnit split_unit(WorkUnit& victim, std::uint32_t kmax_requester, std::uint64_t new_id) {
  WorkUnit fresh;
  fresh.id = new_id;
  fresh.kmax = kmax_requester;
  const std::size_t k_new =
      std::min<std::size_t>(kmax_requester, victim.intervals.size());
  for (std::size_t i = 0; i < k_new; ++i) {
    Interval& iv = victim.intervals[i];
    if (iv.length() < BigCount(2)) continue;  // not splittable
    BigCount mid = (iv.a + iv.b).half();
    fresh.intervals.emplace_back(mid, iv.b);
    iv.b = std::move(mid);
  }
  if (!fresh.intervals.empty()) victim.modified = true;
  return fresh;
}

bool units_equal(std::span<const Interval> a, std::span<const Interval> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace pbb
