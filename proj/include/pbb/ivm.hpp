#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pbb/bound.hpp"
#include "pbb/factoradic.hpp"

namespace pbb {

// Integer-Vector-Matrix state of one depth-first explorer over a factoradic
// interval [a,b) of the permutation tree.
//
// Row l of the matrix holds the n-l jobs available at level l; a job j is
// stored as j+1 and negated when the cell is pruned or already consumed.
// V[l] is the selected position within row l, I the current level, and
// dir[l] tells whether the job selected at level l extends the prefix or
// the suffix. The end vector bounds the owned interval; comparing the
// zero-padded V against it decides exhaustion.
class Ivm {
 public:
  enum class State : std::uint8_t { Empty, Active, Initializing };

  explicit Ivm(int n);

  // Test/tool constructor from explicit internals; rows hold job values
  // 0..n-1, negative entries mark pruned cells (job 0 cannot be expressed
  // pruned this way, use the normal operators for that).
  Ivm(int n, int level, std::vector<int> v, const std::vector<std::vector<int>>& rows,
      std::vector<BranchDir> dirs);

  int n() const { return n_; }
  State state() const { return state_; }
  int level() const { return level_; }

  // Fresh explorer owning the whole tree [0, n!).
  void init_root();

  // Position the explorer at the start of [a, b): replay the path to a
  // digit by digit, decomposing each node along the way (pruning against
  // the given incumbent) and marking everything left of the path consumed.
  // b == nullopt means the interval extends to n!.
  void init_at(const Factoradic& a, const std::optional<Factoradic>& b_fact,
               const BigCount& b_dec, const Instance& inst, std::int64_t incumbent,
               BoundScratch& scratch, std::uint64_t* decomposed = nullptr);

  // Advance to the next open node; false (and state Empty) when the
  // interval is exhausted.
  bool select_next();

  // Expand the current node: the free jobs move to the next row with the
  // decomposition's pruning flags applied, I descends onto it.
  void branch(const Decomposition& dec);

  // Mark the current cell consumed so selection moves past it.
  void prune_current();

  // Subproblem designated by the current position.
  void decode(Subproblem& out) const;
  Subproblem decode() const;

  int free_count() const { return n_ - 1 - level_; }

  // Zero-padded V as a factoradic; the first leaf of the current subtree.
  Factoradic position() const;
  std::uint64_t position_u64() const;  // requires n <= 20

  const std::optional<Factoradic>& end_fact() const { return end_fact_; }
  const BigCount& end_dec() const { return end_dec_; }

  // Truncate the owned interval on the right (work-stealing victim side).
  void shrink_end(Factoradic end_fact, BigCount end_dec);

  // Remaining leaves [position, end) as decimals; zero when Empty.
  BigCount remaining_length() const;

  void check_invariants() const;  // throws on corruption

 private:
  int cell(int row, int col) const { return mat_[static_cast<std::size_t>(row) * n_ + col]; }
  int& cell(int row, int col) { return mat_[static_cast<std::size_t>(row) * n_ + col]; }
  int row_len(int row) const { return n_ - row; }
  bool position_reached_end() const;

  int n_ = 0;
  int level_ = -1;
  State state_ = State::Empty;
  std::vector<int> v_;
  std::vector<int> mat_;
  std::vector<BranchDir> dir_;
  std::optional<Factoradic> end_fact_;  // nullopt = n!
  BigCount end_dec_;
};

}  // namespace pbb
