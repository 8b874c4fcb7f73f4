#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scx/error.hpp"
#include "scx/numeric.hpp"
#include "scx/rng.hpp"
#include "scx/scoring.hpp"
#include "scx/sparse_matrix.hpp"

namespace scx {

enum class SelectionStrategy { sc_low, sc_high, random, temporal };

inline SelectionStrategy parse_strategy(const std::string& s) {
  if (s == "sc_low") return SelectionStrategy::sc_low;
  if (s == "sc_high") return SelectionStrategy::sc_high;
  if (s == "random") return SelectionStrategy::random;
  if (s == "temporal") return SelectionStrategy::temporal;
  throw ArgumentError("unknown selection strategy: " + s);
}

struct SelectionSpec {
  SelectionStrategy strategy = SelectionStrategy::sc_low;
  double rate = 0.1;
  std::uint64_t seed = 0;
  bool stratified = true;
};

namespace detail {

// Per-user priority order for one strategy. Returns entry indices, best
// first. Score ties break by (timestamp, col); temporal ties by larger col.
inline std::vector<std::size_t> user_priority(const SparseMatrix& m,
                                              const ScoreTable* scores,
                                              std::size_t first,
                                              std::size_t last,
                                              const SelectionSpec& spec,
                                              std::uint32_t row) {
  std::vector<std::size_t> order;
  order.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) order.push_back(i);
  auto score_of = [&](std::size_t i) {
    const Entry& e = m.entries()[i];
    auto it = scores->scores.find({e.row, e.col});
    if (it == scores->scores.end())
      throw DataError("score table does not cover every matrix entry");
    return it->second;
  };
  switch (spec.strategy) {
    case SelectionStrategy::sc_low:
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Entry &ea = m.entries()[a], &eb = m.entries()[b];
        double sa = score_of(a), sb = score_of(b);
        if (sa != sb) return sa < sb;
        if (ea.timestamp != eb.timestamp) return ea.timestamp < eb.timestamp;
        return ea.col < eb.col;
      });
      break;
    case SelectionStrategy::sc_high:
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Entry &ea = m.entries()[a], &eb = m.entries()[b];
        double sa = score_of(a), sb = score_of(b);
        if (sa != sb) return sa > sb;
        if (ea.timestamp != eb.timestamp) return ea.timestamp < eb.timestamp;
        return ea.col < eb.col;
      });
      break;
    case SelectionStrategy::random: {
      Rng rng(mix_seed(spec.seed, row));
      rng.shuffle(order);
      break;
    }
    case SelectionStrategy::temporal:
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Entry &ea = m.entries()[a], &eb = m.entries()[b];
        if (ea.timestamp != eb.timestamp) return ea.timestamp > eb.timestamp;
        return ea.col > eb.col;
      });
      break;
  }
  return order;
}

}  // namespace detail

// Training-subset selection. With stratification every user keeps at least
// one entry: user u with c_u interactions contributes max(1, ceil(rate*c_u))
// highest-priority entries, and the total is then trimmed toward
// floor(rate*|entries|) by dropping the lowest-priority picks from the users
// holding the largest surplus over their fair share rate*c_u, never a user's
// last entry. Without stratification the same priority order is applied
// globally.
inline EntrySet select_subset(const SparseMatrix& matrix,
                              const ScoreTable& scores,
                              const SelectionSpec& spec) {
  if (!(spec.rate > 0.0 && spec.rate <= 1.0))
    throw ArgumentError("selection rate must lie in (0,1]");
  if (matrix.nnz() == 0) throw DataError("cannot select from an empty matrix");
  if (spec.strategy == SelectionStrategy::temporal && !matrix.has_timestamps())
    throw DataError("temporal selection requires timestamps on every entry");
  const std::size_t n_target =
      floor_count(spec.rate * static_cast<double>(matrix.nnz()));

  EntrySet out{EntrySetKind::pert, {}};
  if (!spec.stratified) {
    auto order = detail::user_priority(matrix, &scores, 0, matrix.nnz(), spec,
                                       0xffffffffu);
    std::size_t take = std::max<std::size_t>(1, n_target);
    order.resize(std::min(order.size(), take));
    std::sort(order.begin(), order.end());
    for (std::size_t i : order) {
      const Entry& e = matrix.entries()[i];
      out.positions.push_back({e.row, e.col});
    }
    return out;
  }

  // count users with interactions
  std::size_t n_users = 0;
  for (std::uint32_t r = 0; r < matrix.n_rows(); ++r)
    if (matrix.row_ptr()[r + 1] > matrix.row_ptr()[r]) ++n_users;
  if (spec.rate * static_cast<double>(matrix.nnz()) <
      static_cast<double>(n_users))
    throw ArgumentError(
        "rate too small to give every user at least one entry");

  struct UserPick {
    std::uint32_t row;
    std::vector<std::size_t> order;  // priority order, best first
    std::size_t taken;
    double fair_share;
  };
  std::vector<UserPick> picks;
  std::size_t total = 0;
  for (std::uint32_t r = 0; r < matrix.n_rows(); ++r) {
    std::size_t first = matrix.row_ptr()[r], last = matrix.row_ptr()[r + 1];
    if (first == last) continue;
    double c = static_cast<double>(last - first);
    auto quota = std::max<std::size_t>(1, ceil_count(spec.rate * c));
    quota = std::min(quota, last - first);
    UserPick up;
    up.row = r;
    up.order = detail::user_priority(matrix, &scores, first, last, spec, r);
    up.taken = quota;
    up.fair_share = spec.rate * c;
    total += quota;
    picks.push_back(std::move(up));
  }

  // trim ceiling overshoot from the largest surpluses
  while (total > n_target) {
    std::size_t best = picks.size();
    double best_surplus = 0.0;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      if (picks[i].taken <= 1) continue;
      double surplus =
          static_cast<double>(picks[i].taken) - picks[i].fair_share;
      if (best == picks.size() || surplus > best_surplus) {
        best = i;
        best_surplus = surplus;
      }
    }
    if (best == picks.size()) break;  // every user is down to one entry
    --picks[best].taken;
    --total;
  }

  std::vector<std::size_t> selected;
  selected.reserve(total);
  for (const auto& up : picks)
    for (std::size_t i = 0; i < up.taken; ++i) selected.push_back(up.order[i]);
  std::sort(selected.begin(), selected.end());
  out.positions.reserve(selected.size());
  for (std::size_t i : selected) {
    const Entry& e = matrix.entries()[i];
    out.positions.push_back({e.row, e.col});
  }
  return out;
}

// Same matrix restricted to the given positions; dimensions and token maps
// are preserved.
inline SparseMatrix subset_matrix(const SparseMatrix& m, const EntrySet& set) {
  std::vector<Entry> entries;
  entries.reserve(set.positions.size());
  for (const auto& pos : set.positions) {
    auto idx = m.find(pos.row, pos.col);
    if (!idx) throw ArgumentError("subset position not present in matrix");
    entries.push_back(m.entries()[*idx]);
  }
  return m.with_entries(std::move(entries));
}

// Percentage change of a metric relative to the full-data baseline.
inline double rpa(double metric_at_rate, double metric_at_full) {
  if (!(metric_at_full > 0.0))
    throw ArgumentError("rpa: baseline metric must be positive");
  return (metric_at_rate - metric_at_full) / metric_at_full * 100.0;
}

struct Correlation {
  double pearson_r = 0.0;
  std::size_t n = 0;
};

// Pearson product-moment coefficient, two-pass with compensated sums.
inline Correlation correlate(const std::vector<std::pair<double, double>>& pairs) {
  const std::size_t n = pairs.size();
  if (n < 3) throw ArgumentError("correlate: need at least 3 pairs");
  detail::KahanSum sx, sy;
  for (const auto& [x, y] : pairs) {
    sx.add(x);
    sy.add(y);
  }
  double mx = sx.value() / static_cast<double>(n);
  double my = sy.value() / static_cast<double>(n);
  detail::KahanSum sxy, sxx, syy;
  for (const auto& [x, y] : pairs) {
    sxy.add((x - mx) * (y - my));
    sxx.add((x - mx) * (x - mx));
    syy.add((y - my) * (y - my));
  }
  if (sxx.value() <= 0.0 || syy.value() <= 0.0)
    throw DataError("correlate: a coordinate has zero variance");
  Correlation c;
  c.n = n;
  c.pearson_r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return c;
}

}  // namespace scx
