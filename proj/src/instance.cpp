#include "pbb/instance.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pbb {

void Instance::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("instance needs n >= 1 and m >= 1");
  if (p.size() != static_cast<std::size_t>(n) * m) {
    throw std::invalid_argument("processing-time matrix has wrong size");
  }
  for (std::int32_t v : p) {
    if (v < 0) throw std::invalid_argument("negative processing time");
  }
}

Instance parse_instance(const std::string& text, InstanceLayout layout, const std::string& label) {
  std::istringstream in(text);
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("instance header must hold n and m");
  if (n < 1 || m < 1 || n > 100000 || m > 100000) {
    throw std::runtime_error("instance header out of range");
  }
  Instance inst;
  inst.n = static_cast<int>(n);
  inst.m = static_cast<int>(m);
  inst.label = label;
  inst.p.assign(static_cast<std::size_t>(n) * m, 0);
  const std::size_t total = inst.p.size();
  for (std::size_t i = 0; i < total; ++i) {
    long long v = 0;
    if (!(in >> v)) throw std::runtime_error("instance matrix truncated: expected " +
                                             std::to_string(total) + " entries");
    if (v < 0) throw std::runtime_error("negative processing time in instance file");
    if (v > INT32_MAX) throw std::runtime_error("processing time too large");
    if (layout == InstanceLayout::JobMajor) {
      inst.p[i] = static_cast<std::int32_t>(v);
    } else {
      const std::size_t k = i / n, j = i % n;
      inst.p[j * m + k] = static_cast<std::int32_t>(v);
    }
  }
  long long extra = 0;
  if (in >> extra) throw std::runtime_error("instance file has trailing entries (dimension mismatch?)");
  inst.validate();
  return inst;
}

Instance load_instance(const std::string& path, InstanceLayout layout) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_instance(ss.str(), layout, path);
}

void save_instance(const Instance& inst, const std::string& path, InstanceLayout layout) {
  inst.validate();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write instance file: " + path);
  f << inst.n << ' ' << inst.m << '\n';
  if (layout == InstanceLayout::JobMajor) {
    for (int j = 0; j < inst.n; ++j) {
      for (int k = 0; k < inst.m; ++k) f << inst.pt(j, k) << (k + 1 == inst.m ? '\n' : ' ');
    }
  } else {
    for (int k = 0; k < inst.m; ++k) {
      for (int j = 0; j < inst.n; ++j) f << inst.pt(j, k) << (j + 1 == inst.n ? '\n' : ' ');
    }
  }
  if (!f.flush()) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr std::int32_t kLcgModulus = 2147483647;  // 2^31 - 1

// Minimal standard generator, Schrage's method.
std::int32_t lcg_next(std::int32_t& seed) {
  constexpr std::int32_t a = 16807, b = 127773, c = 2836;
  const std::int32_t k = seed / b;
  seed = a * (seed % b) - k * c;
  if (seed < 0) seed += kLcgModulus;
  return seed;
}

std::int32_t unif(std::int32_t& seed, std::int32_t low, std::int32_t high) {
  lcg_next(seed);
  return low + static_cast<std::int32_t>(static_cast<std::int64_t>(seed) * (high - low + 1) /
                                         kLcgModulus);
}

}  // namespace

Instance generate_taillard(int n, int m, std::int32_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("generate_taillard needs n >= 1 and m >= 1");
  if (seed < 1 || seed > kLcgModulus - 2) {
    throw std::invalid_argument("generator seed must be in [1, 2^31-3]");
  }
  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.label = "tai-" + std::to_string(n) + "x" + std::to_string(m) + "-" + std::to_string(seed);
  inst.p.assign(static_cast<std::size_t>(n) * m, 0);
  std::int32_t s = seed;
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < n; ++j) inst.p[static_cast<std::size_t>(j) * m + k] = unif(s, 1, 99);
  }
  return inst;
}

namespace {

struct TaClass {
  int first;  // 1-based index of the first instance of the class
  int n, m;
  std::array<std::int32_t, 10> seeds;
};

// Time seeds of the 120 Taillard (1993) flow-shop instances.
constexpr std::array<TaClass, 12> kTaillard = {{
    {1, 20, 5, {873654221, 379008056, 1866992158, 216771124, 495070989, 402959317, 1369363414, 2021925980, 573109518, 88325120}},
    {11, 20, 10, {587595453, 1401007982, 873136276, 268827376, 1634173168, 691823909, 73807235, 1273398721, 2065119309, 1672900551}},
    {21, 20, 20, {479340445, 268827376, 1958948863, 918272953, 555010963, 2010851491, 1519833303, 1748670931, 1923497586, 1829909967}},
    {31, 50, 5, {1328042058, 200382020, 496319842, 1203030903, 1730708564, 450926852, 1303135678, 1273398721, 587288402, 248421594}},
    {41, 50, 10, {1958948863, 575633267, 655816003, 1977864101, 93805469, 1803345551, 49612559, 1899802599, 2013025619, 578962478}},
    {51, 50, 20, {1539989115, 691823909, 655816003, 1315102446, 1949668355, 1923497586, 1805594913, 1861070898, 715643788, 464843328}},
    {61, 100, 5, {896678084, 1179439976, 1122278347, 416756875, 267829958, 1835213917, 1328833962, 1418570761, 161033112, 304212574}},
    {71, 100, 10, {1539989115, 655816003, 960914243, 1915696806, 2013025619, 1168140026, 1923497586, 167698528, 1528387973, 993794175}},
    {81, 100, 20, {450926852, 1462772409, 1021685265, 83696007, 508154254, 1861070898, 26482542, 444956424, 2115448041, 118254244}},
    {91, 200, 10, {471503978, 1215892992, 135346136, 1602504050, 160037322, 551454346, 519485142, 383947510, 1968171878, 540872513}},
    {101, 200, 20, {2013025619, 475051709, 914834335, 810642687, 1019331795, 2056065863, 1342855162, 1325809384, 1988803007, 765656702}},
    {111, 500, 20, {1368624604, 450181436, 1927888393, 1759567256, 606425239, 19268348, 1298201670, 2041736264, 379756761, 28837162}},
}};

}  // namespace

Instance taillard_named(const std::string& name) {
  if (name.size() != 5 || (name.substr(0, 2) != "ta" && name.substr(0, 2) != "Ta")) {
    throw std::invalid_argument("expected instance name of the form ta001..ta120");
  }
  int idx = 0;
  try {
    idx = std::stoi(name.substr(2));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad instance number in '" + name + "'");
  }
  if (idx < 1 || idx > 120) throw std::invalid_argument("instance number out of range 1..120");
  for (const TaClass& c : kTaillard) {
    if (idx >= c.first && idx < c.first + 10) {
      Instance inst = generate_taillard(c.n, c.m, c.seeds[static_cast<std::size_t>(idx - c.first)]);
      char buf[8];
      std::snprintf(buf, sizeof buf, "ta%03d", idx);
      inst.label = buf;
      return inst;
    }
  }
  throw std::logic_error("unreachable");
}

std::int64_t makespan(const Instance& inst, std::span<const int> perm) {
  if (perm.size() != static_cast<std::size_t>(inst.n)) {
    throw std::invalid_argument("schedule length does not match instance");
  }
  std::vector<char> seen(static_cast<std::size_t>(inst.n), 0);
  for (int j : perm) {
    if (j < 0 || j >= inst.n || seen[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("schedule is not a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(j)] = 1;
  }
  std::vector<std::int64_t> c(static_cast<std::size_t>(inst.m), 0);
  for (int j : perm) {
    const std::int32_t* row = inst.p.data() + static_cast<std::size_t>(j) * inst.m;
    c[0] += row[0];
    for (int k = 1; k < inst.m; ++k) c[k] = std::max(c[k], c[k - 1]) + row[k];
  }
  return c[static_cast<std::size_t>(inst.m) - 1];
}

Instance reversed_instance(const Instance& inst) {
  Instance r = inst;
  for (int j = 0; j < inst.n; ++j) {
    for (int k = 0; k < inst.m; ++k) r.p[static_cast<std::size_t>(j) * inst.m + k] = inst.pt(j, inst.m - 1 - k);
  }
  return r;
}

std::uint64_t instance_fingerprint(const Instance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(inst.n));
  mix(static_cast<std::uint64_t>(inst.m));
  for (std::int32_t v : inst.p) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
  return h;
}

}  // namespace pbb
