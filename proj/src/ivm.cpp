#include "pbb/ivm.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pbb {

Ivm::Ivm(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Ivm needs n >= 1");
  v_.assign(static_cast<std::size_t>(n), 0);
  mat_.assign(static_cast<std::size_t>(n) * n, 0);
  dir_.assign(static_cast<std::size_t>(n), BranchDir::Forward);
  end_dec_ = BigCount::factorial(n);
}

Ivm::Ivm(int n, int level, std::vector<int> v, const std::vector<std::vector<int>>& rows,
         std::vector<BranchDir> dirs)
    : Ivm(n) {
  if (static_cast<int>(v.size()) != n || static_cast<int>(dirs.size()) != n) {
    throw std::invalid_argument("Ivm: bad vector sizes");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != row_len(static_cast<int>(r))) {
      throw std::invalid_argument("Ivm: bad row length");
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const int job = rows[r][c];
      cell(static_cast<int>(r), static_cast<int>(c)) = job >= 0 ? job + 1 : job - 1;
    }
  }
  v_ = std::move(v);
  dir_ = std::move(dirs);
  level_ = level;
  state_ = State::Active;
}

void Ivm::init_root() {
  std::fill(v_.begin(), v_.end(), 0);
  std::fill(dir_.begin(), dir_.end(), BranchDir::Forward);
  for (int c = 0; c < n_; ++c) cell(0, c) = c + 1;
  level_ = 0;
  state_ = State::Active;
  end_fact_.reset();
  end_dec_ = BigCount::factorial(n_);
}

void Ivm::init_at(const Factoradic& a, const std::optional<Factoradic>& b_fact,
                  const BigCount& b_dec, const Instance& inst, std::int64_t incumbent,
                  BoundScratch& scratch, std::uint64_t* decomposed) {
  validate_factoradic(a);
  if (a.size() != n_) throw std::invalid_argument("init_at: factoradic length mismatch");
  if (b_fact && to_decimal(*b_fact) != b_dec) {
    throw std::invalid_argument("init_at: end vector and end decimal disagree");
  }
  init_root();
  state_ = State::Initializing;
  end_fact_ = b_fact;
  end_dec_ = b_dec;

  if (to_decimal(a) >= b_dec) {
    state_ = State::Empty;
    return;
  }

  // Replay the path to a. At each level the cells left of the digit are
  // flagged consumed; the node itself is decomposed to build the next row
  // unless the path dies on a pruned cell (selection then resumes from the
  // clamped position).
  for (int l = 0; l <= n_ - 2; ++l) {
    const int digit = a.digits[l];
    v_[l] = digit;
    level_ = l;
    for (int c = 0; c < digit; ++c) {
      int& x = cell(l, c);
      if (x > 0) x = -x;
    }
    if (cell(l, digit) < 0) break;  // replayed path is pruned here
    if (l == n_ - 2) break;         // positioned on the leaf row

    decode(scratch.sub);
    Decomposition dec;
    decompose(inst, scratch.sub, incumbent, scratch, dec);
    branch(dec);
    if (decomposed) ++*decomposed;
  }
  state_ = State::Active;
}

bool Ivm::position_reached_end() const {
  const Factoradic& end = *end_fact_;
  for (int l = 0; l < n_; ++l) {
    const int pv = l <= level_ ? v_[l] : 0;
    if (pv != end.digits[l]) return pv > end.digits[l];
  }
  return true;  // equal counts as reached ([a,b) is half-open)
}

bool Ivm::select_next() {
  if (state_ != State::Active) return false;
  while (true) {
    if (level_ < 0) {
      state_ = State::Empty;
      return false;
    }
    const int len = row_len(level_);
    int c = v_[level_];
    while (c < len && cell(level_, c) < 0) ++c;
    v_[level_] = c;
    if (c >= len) {  // row exhausted: backtrack
      v_[level_] = 0;
      --level_;
      if (level_ >= 0) ++v_[level_];
      continue;
    }
    if (end_fact_ && position_reached_end()) {
      state_ = State::Empty;
      return false;
    }
    return true;
  }
}

void Ivm::branch(const Decomposition& dec) {
  if (level_ >= n_ - 1) throw std::logic_error("branch: already at leaf level");
  const int row = level_;
  const int len = row_len(row);
  const int sel = v_[row];
  if (static_cast<int>(dec.pruned.size()) != len - 1) {
    throw std::invalid_argument("branch: decomposition size mismatch");
  }
  int out = 0;
  for (int c = 0; c < len; ++c) {
    if (c == sel) continue;
    const int job = std::abs(cell(row, c));
    cell(row + 1, out) = dec.pruned[static_cast<std::size_t>(out)] ? -job : job;
    ++out;
  }
  dir_[static_cast<std::size_t>(row + 1)] = dec.direction;
  ++level_;
  v_[level_] = 0;
#ifndef NDEBUG
  check_invariants();
#endif
}

void Ivm::prune_current() {
  int& x = cell(level_, v_[level_]);
  if (x > 0) x = -x;
}

void Ivm::decode(Subproblem& out) const {
  if (state_ == State::Empty || level_ < 0) throw std::logic_error("decode: no node selected");
  out.perm.resize(static_cast<std::size_t>(n_));
  int d1 = 0, d2 = 0;
  for (int l = 0; l <= level_; ++l) {
    const int job = std::abs(cell(l, v_[l])) - 1;
    if (dir_[static_cast<std::size_t>(l)] == BranchDir::Forward) {
      out.perm[static_cast<std::size_t>(d1++)] = job;
    } else {
      out.perm[static_cast<std::size_t>(n_ - 1 - d2++)] = job;
    }
  }
  int pos = d1;
  const int len = row_len(level_);
  for (int c = 0; c < len; ++c) {
    if (c == v_[level_]) continue;
    out.perm[static_cast<std::size_t>(pos++)] = std::abs(cell(level_, c)) - 1;
  }
  out.d1 = d1;
  out.d2 = d2;
}

Subproblem Ivm::decode() const {
  Subproblem s;
  decode(s);
  return s;
}

Factoradic Ivm::position() const {
  Factoradic f = Factoradic::zero(n_);
  for (int l = 0; l <= level_; ++l) f.digits[l] = v_[l];
  return f;
}

std::uint64_t Ivm::position_u64() const {
  return to_decimal_u64(position());
}

void Ivm::shrink_end(Factoradic end_fact, BigCount end_dec) {
  end_fact_ = std::move(end_fact);
  end_dec_ = std::move(end_dec);
}

BigCount Ivm::remaining_length() const {
  if (state_ != State::Active) return BigCount();
  const BigCount pos = to_decimal(position());
  if (pos >= end_dec_) return BigCount();
  return end_dec_ - pos;
}

void Ivm::check_invariants() const {
  if (state_ != State::Active) return;
  std::vector<char> on_path(static_cast<std::size_t>(n_) + 1, 0);
  for (int l = 0; l <= level_; ++l) {
    if (v_[l] < 0 || v_[l] > row_len(l)) throw std::logic_error("ivm: V out of range");
    std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
    for (int c = 0; c < row_len(l); ++c) {
      const int job = std::abs(cell(l, c));
      if (job < 1 || job > n_ || seen[static_cast<std::size_t>(job)]) {
        throw std::logic_error("ivm: corrupt matrix row");
      }
      seen[static_cast<std::size_t>(job)] = 1;
    }
    if (v_[l] < row_len(l)) {
      const int job = std::abs(cell(l, v_[l]));
      if (on_path[static_cast<std::size_t>(job)]) throw std::logic_error("ivm: duplicate on path");
      on_path[static_cast<std::size_t>(job)] = 1;
    }
  }
}

}  // namespace pbb
