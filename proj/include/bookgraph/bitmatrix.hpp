#pragma once

// Dense bit rows packed into 64-bit words. The row AND + popcount is the hot
// path of every triangle count.

#include <bit>
#include <span>
#include <stdexcept>
#include <vector>

#include "bookgraph/common.hpp"

namespace bookgraph {

class BitMatrix {
 public:
  BitMatrix() = default;

  BitMatrix(i64 rows, i64 cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("BitMatrix: negative shape");
    rows_ = rows;
    cols_ = cols;
    wpr_ = (cols + 63) / 64;
    words_.assign(static_cast<size_t>(rows_ * wpr_), 0);
  }

  i64 rows() const { return rows_; }
  i64 cols() const { return cols_; }
  i64 words_per_row() const { return wpr_; }

  void set(i64 i, i64 j) {
    check(i, j);
    words_[idx(i, j)] |= bit(j);
  }

  void reset(i64 i, i64 j) {
    check(i, j);
    words_[idx(i, j)] &= ~bit(j);
  }

  bool test(i64 i, i64 j) const {
    check(i, j);
    return (words_[idx(i, j)] & bit(j)) != 0;
  }

  std::span<const u64> row(i64 i) const {
    return {words_.data() + static_cast<size_t>(i * wpr_), static_cast<size_t>(wpr_)};
  }

  std::span<u64> row(i64 i) {
    return {words_.data() + static_cast<size_t>(i * wpr_), static_cast<size_t>(wpr_)};
  }

  i64 row_count(i64 i) const {
    i64 c = 0;
    for (u64 w : row(i)) c += std::popcount(w);
    return c;
  }

  i64 count() const {
    i64 c = 0;
    for (u64 w : words_) c += std::popcount(w);
    return c;
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (i64 i = 0; i < rows_; ++i)
      for_each_set(row(i), [&](i64 j) { t.words_[t.idx(j, i)] |= t.bit(i); });
    return t;
  }

  // No bit set beyond cols_ in any row; relied on by the popcount paths and
  // checked when loading untrusted words.
  bool tail_clean() const {
    int tail = static_cast<int>(cols_ % 64);
    if (wpr_ == 0 || tail == 0) return true;
    u64 mask = ~((u64{1} << tail) - 1);
    for (i64 i = 0; i < rows_; ++i)
      if (row(i)[static_cast<size_t>(wpr_ - 1)] & mask) return false;
    return true;
  }

  std::span<const u64> raw_words() const { return words_; }
  std::span<u64> raw_words() { return words_; }

  static i64 and_count(std::span<const u64> a, std::span<const u64> b) {
    i64 c = 0;
    for (size_t k = 0; k < a.size(); ++k) c += std::popcount(a[k] & b[k]);
    return c;
  }

  static i64 and_andnot_count(std::span<const u64> a, std::span<const u64> b,
                              std::span<const u64> excl) {
    i64 c = 0;
    for (size_t k = 0; k < a.size(); ++k) c += std::popcount(a[k] & b[k] & ~excl[k]);
    return c;
  }

  // dst |= a & b
  static void or_and_into(std::span<u64> dst, std::span<const u64> a, std::span<const u64> b) {
    for (size_t k = 0; k < dst.size(); ++k) dst[k] |= a[k] & b[k];
  }

  template <typename Fn>
  static void for_each_set(std::span<const u64> r, Fn&& fn) {
    for (size_t k = 0; k < r.size(); ++k) {
      u64 w = r[k];
      while (w) {
        int b = std::countr_zero(w);
        fn(static_cast<i64>(k) * 64 + b);
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  i64 rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<u64> words_;

  size_t idx(i64 i, i64 j) const { return static_cast<size_t>(i * wpr_ + j / 64); }
  static u64 bit(i64 j) { return u64{1} << (j % 64); }
  void check(i64 i, i64 j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw std::invalid_argument("BitMatrix: index (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of range for " +
                                  std::to_string(rows_) + "x" + std::to_string(cols_));
  }
};

}  // namespace bookgraph
