#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pbb {

// A permutation flow-shop instance: n jobs cross m machines in identical
// order, p(j,k) is the processing time of job j on machine k.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<std::int32_t> p;  // row-major, p[j*m + k]
  std::string label;

  std::int32_t pt(int j, int k) const { return p[static_cast<std::size_t>(j) * m + k]; }
  void validate() const;  // throws on bad dimensions or negative entries
};

struct Schedule {
  std::vector<int> perm;
  std::int64_t cmax = -1;  // -1 = not evaluated

  bool evaluated() const { return cmax >= 0; }
};

enum class InstanceLayout { JobMajor, MachineMajor };

// Plain-text format: first line "n m", then the matrix, one row per job
// (JobMajor) or one row per machine (MachineMajor).
Instance load_instance(const std::string& path, InstanceLayout layout);
Instance parse_instance(const std::string& text, InstanceLayout layout, const std::string& label);
void save_instance(const Instance& inst, const std::string& path, InstanceLayout layout);

// Deterministic benchmark generator: processing times uniform in [1,99]
// drawn machine-major from the minimal standard LCG (16807, 2^31-1), so
// published Taillard instances are reproduced bit-exactly from their seeds.
Instance generate_taillard(int n, int m, std::int32_t seed);

// Named instances ta001..ta120 from the published seed table.
Instance taillard_named(const std::string& name);

// Makespan of a complete schedule, O(nm). Throws if perm is not a
// permutation of 0..n-1.
std::int64_t makespan(const Instance& inst, std::span<const int> perm);

// The instance with machine order reversed; makespan(reverse, reversed
// perm) equals makespan(inst, perm).
Instance reversed_instance(const Instance& inst);

// FNV-1a over (n, m, p); used to fingerprint checkpoints.
std::uint64_t instance_fingerprint(const Instance& inst);

}  // namespace pbb
