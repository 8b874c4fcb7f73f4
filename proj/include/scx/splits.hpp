#pragma once

#include <cstdint>
#include <vector>

#include "scx/error.hpp"
#include "scx/rng.hpp"
#include "scx/sparse_matrix.hpp"

namespace scx {

struct HoldoutSplit {
  SparseMatrix train;
  EntrySet test;                    // one position per user
  std::vector<Entry> test_entries;  // same order as test.positions
};

// Leave-last-out: each user's maximal-timestamp interaction goes to test.
// Ties on the max timestamp break toward the largest column index.
inline HoldoutSplit holdout_last_interaction(const SparseMatrix& m) {
  if (m.nnz() == 0) throw DataError("holdout on empty matrix");
  if (!m.has_timestamps())
    throw DataError("holdout_last_interaction requires timestamps on every entry");
  const auto& entries = m.entries();
  std::vector<std::ptrdiff_t> pick(m.n_rows(), -1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    auto& p = pick[e.row];
    if (p < 0) {
      p = static_cast<std::ptrdiff_t>(i);
      continue;
    }
    const Entry& cur = entries[static_cast<std::size_t>(p)];
    if (e.timestamp > cur.timestamp ||
        (e.timestamp == cur.timestamp && e.col > cur.col))
      p = static_cast<std::ptrdiff_t>(i);
  }
  HoldoutSplit split;
  split.test.kind = EntrySetKind::fold;
  std::vector<bool> held(entries.size(), false);
  for (std::uint32_t r = 0; r < m.n_rows(); ++r) {
    if (pick[r] < 0) continue;  // user with no interactions cannot occur
    auto idx = static_cast<std::size_t>(pick[r]);
    held[idx] = true;
    split.test.positions.push_back({entries[idx].row, entries[idx].col});
    split.test_entries.push_back(entries[idx]);
  }
  std::vector<Entry> train_entries;
  train_entries.reserve(entries.size() - split.test_entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (!held[i]) train_entries.push_back(entries[i]);
  split.train = m.with_entries(std::move(train_entries));
  return split;
}

// Seeded uniform shuffle dealt into n_folds disjoint folds whose sizes
// differ by at most one; their union is the full observed set.
inline std::vector<std::vector<std::size_t>> partition_entry_indices(
    const SparseMatrix& m, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ArgumentError("partition_entries: n_folds must be >= 2");
  if (m.nnz() < n_folds)
    throw ArgumentError("partition_entries: n_folds exceeds entry count");
  std::vector<std::size_t> order(m.nnz());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x666f6c64));  // "fold" stream
  rng.shuffle(order);
  std::size_t base = m.nnz() / n_folds;
  std::size_t extra = m.nnz() % n_folds;
  std::vector<std::vector<std::size_t>> folds(n_folds);
  std::size_t at = 0;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].reserve(len);
    for (std::size_t i = 0; i < len; ++i) folds[f].push_back(order[at++]);
  }
  return folds;
}

inline std::vector<EntrySet> partition_entries(const SparseMatrix& m,
                                               std::size_t n_folds,
                                               std::uint64_t seed) {
  auto idx = partition_entry_indices(m, n_folds, seed);
  std::vector<EntrySet> folds(n_folds);
  for (std::size_t f = 0; f < n_folds; ++f) {
    folds[f].kind = EntrySetKind::fold;
    folds[f].positions.reserve(idx[f].size());
    for (std::size_t i : idx[f]) {
      const Entry& e = m.entries()[i];
      folds[f].positions.push_back({e.row, e.col});
    }
  }
  return folds;
}

}  // namespace scx
