#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scx/error.hpp"

namespace scx {

constexpr std::int64_t kNoTimestamp = std::numeric_limits<std::int64_t>::min();

struct Entry {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
  std::int64_t timestamp = kNoTimestamp;
};

struct Position {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

enum class EntrySetKind { val, remove, add, pert, fold };

struct EntrySet {
  EntrySetKind kind = EntrySetKind::pert;
  std::vector<Position> positions;
  std::size_t size() const { return positions.size(); }
};

// Immutable sparse rating matrix. Entries are stored sorted by (row, col)
// with CSR-style row offsets; token maps are carried along so subsets and
// perturbed variants stay exportable.
class SparseMatrix {
public:
  SparseMatrix() = default;

  SparseMatrix(std::uint32_t n_rows, std::uint32_t n_cols,
               std::vector<Entry> entries,
               std::vector<std::string> row_tokens = {},
               std::vector<std::string> col_tokens = {})
      : n_rows_(n_rows),
        n_cols_(n_cols),
        entries_(std::move(entries)),
        row_tokens_(std::move(row_tokens)),
        col_tokens_(std::move(col_tokens)) {
    finalize();
  }

  std::uint32_t n_rows() const { return n_rows_; }
  std::uint32_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }

  const std::string& row_token(std::uint32_t r) const { return row_tokens_[r]; }
  const std::string& col_token(std::uint32_t c) const { return col_tokens_[c]; }
  const std::vector<std::string>& row_tokens() const { return row_tokens_; }
  const std::vector<std::string>& col_tokens() const { return col_tokens_; }

  bool has_timestamps() const {
    for (const auto& e : entries_)
      if (e.timestamp == kNoTimestamp) return false;
    return !entries_.empty();
  }

  std::optional<std::size_t> find(std::uint32_t row, std::uint32_t col) const {
    if (row >= n_rows_) return std::nullopt;
    auto lo = entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    auto hi = entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    auto it = std::lower_bound(lo, hi, col, [](const Entry& e, std::uint32_t c) {
      return e.col < c;
    });
    if (it != hi && it->col == col)
      return static_cast<std::size_t>(it - entries_.begin());
    return std::nullopt;
  }

  bool contains(std::uint32_t row, std::uint32_t col) const {
    return find(row, col).has_value();
  }

  // M_ij, reading 0 for cells outside the observed set.
  double value_at(std::uint32_t row, std::uint32_t col) const {
    auto idx = find(row, col);
    return idx ? entries_[*idx].value : 0.0;
  }

  // Same dimensions and token maps, different entry list.
  SparseMatrix with_entries(std::vector<Entry> entries) const {
    return SparseMatrix(n_rows_, n_cols_, std::move(entries), row_tokens_,
                        col_tokens_);
  }

  bool all_finite() const {
    for (const auto& e : entries_)
      if (!std::isfinite(e.value)) return false;
    return true;
  }

private:
  void finalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.row >= n_rows_ || e.col >= n_cols_)
        throw ArgumentError("entry position out of bounds");
      if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col)
        throw ArgumentError("duplicate (row, col) entry in sparse matrix");
    }
    if (row_tokens_.empty()) {
      row_tokens_.reserve(n_rows_);
      for (std::uint32_t r = 0; r < n_rows_; ++r)
        row_tokens_.push_back("u" + std::to_string(r));
    }
    if (col_tokens_.empty()) {
      col_tokens_.reserve(n_cols_);
      for (std::uint32_t c = 0; c < n_cols_; ++c)
        col_tokens_.push_back("i" + std::to_string(c));
    }
    if (row_tokens_.size() != n_rows_ || col_tokens_.size() != n_cols_)
      throw ArgumentError("token map size does not match matrix dimensions");
    row_ptr_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);
    for (const auto& e : entries_) ++row_ptr_[e.row + 1];
    for (std::size_t r = 0; r < n_rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  }

  std::uint32_t n_rows_ = 0;
  std::uint32_t n_cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::string> row_tokens_;
  std::vector<std::string> col_tokens_;
};

}  // namespace scx
