#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "scx/numeric.hpp"
#include "scx/error.hpp"
#include "scx/interactions.hpp"
#include "scx/metrics.hpp"
#include "scx/perturbation.hpp"
#include "scx/rng.hpp"
#include "scx/sparse_matrix.hpp"
#include "scx/splits.hpp"
#include "scx/svd.hpp"

namespace scx {

struct ScoreTable {
  std::map<Position, double> scores;        // (row, col) -> |M_ij - M~_ij|
  std::map<Position, std::size_t> fold_of;  // (row, col) -> fold index
  PerturbationParams params;
  std::size_t n_folds = 0;
  std::size_t k = 0;
};

namespace detail {

// One fold, treated as the perturbed set: a seeded alpha-fraction of its
// entries is value-shuffled and the remainder relocated into the complement.
inline PerturbationPlan fold_plan(const SparseMatrix& m,
                                  const std::vector<std::size_t>& fold_entries,
                                  const PerturbationParams& params,
                                  std::uint64_t fold_seed) {
  const std::size_t nf = fold_entries.size();
  const std::size_t n_val_q =
      floor_count(params.alpha * static_cast<double>(nf));
  const std::size_t n_rem_q =
      floor_count((1.0 - params.alpha) * static_cast<double>(nf));
  if (n_val_q == 0 && n_rem_q == 0)
    throw ArgumentError("fold too small to split between value and relocation");
  const std::size_t n_val = n_val_q;
  const std::size_t n_rem = nf - n_val;

  Rng rng(mix_seed(fold_seed, 0x70657274));

  std::vector<std::size_t> chosen;  // positions within fold_entries
  if (params.time_weighted) {
    if (!m.has_timestamps())
      throw DataError("time-weighted sampling requires timestamps on every entry");
    std::vector<std::int64_t> ts(nf);
    for (std::size_t i = 0; i < nf; ++i)
      ts[i] = m.entries()[fold_entries[i]].timestamp;
    auto tw = time_weights(ts, params.epsilon);
    chosen = weighted_sample_without_replacement(tw.weights, n_val, rng);
  } else {
    chosen = rng.sample_indices(nf, n_val);
  }

  PerturbationPlan plan;
  plan.params = params;
  plan.params.seed = fold_seed;
  std::vector<bool> is_val(nf, false);
  plan.omega_val.positions.reserve(n_val);
  for (std::size_t i : chosen) {
    const Entry& e = m.entries()[fold_entries[i]];
    plan.omega_val.positions.push_back({e.row, e.col});
    is_val[i] = true;
  }
  plan.omega_remove.positions.reserve(n_rem);
  for (std::size_t i = 0; i < nf; ++i) {
    if (is_val[i]) continue;
    const Entry& e = m.entries()[fold_entries[i]];
    plan.omega_remove.positions.push_back({e.row, e.col});
  }

  plan.value_permutation.resize(n_val);
  for (std::size_t i = 0; i < n_val; ++i) plan.value_permutation[i] = i;
  rng.shuffle(plan.value_permutation);

  if (n_rem > 0)
    plan.omega_add.positions = sample_complement_positions(m, n_rem, rng);
  return plan;
}

}  // namespace detail

// Per-interaction perturbation errors from the designate-and-perturb
// procedure: every fold plays the perturbed-set role once, and each of its
// entries records the absolute residual between its original rating and the
// corrected reconstruction. Entries added by relocation are artifacts of the
// perturbation and receive no score. Folds are independent given the matrix,
// each seeded as mix_seed(seed, fold index).
inline ScoreTable score_ratings(const SparseMatrix& matrix, std::size_t n_folds,
                                const PerturbationParams& params, std::size_t k,
                                const SvdQuality& quality = {}) {
  params.validate();
  if (n_folds < 2) throw ArgumentError("score_ratings: n_folds must be >= 2");
  std::vector<std::vector<std::size_t>> folds =
      partition_entry_indices(matrix, n_folds, params.seed);

  ScoreTable table;
  table.params = params;
  table.n_folds = n_folds;
  table.k = k;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::uint64_t fold_seed = mix_seed(params.seed, f);
    PerturbationPlan plan =
        detail::fold_plan(matrix, folds[f], params, fold_seed);
    SparseMatrix perturbed = apply_perturbation(matrix, plan);
    SvdFactors factors = truncated_svd(perturbed, k, quality);
    DeltaSigma correction = delta_sigma(matrix, perturbed, factors);

    EntrySet fold_set{EntrySetKind::fold, {}};
    fold_set.positions.reserve(folds[f].size());
    for (std::size_t idx : folds[f]) {
      const Entry& e = matrix.entries()[idx];
      fold_set.positions.push_back({e.row, e.col});
    }
    std::vector<double> pred = predict_entries(factors, correction, fold_set);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const Entry& e = matrix.entries()[folds[f][i]];
      table.scores[{e.row, e.col}] = std::abs(e.value - pred[i]);
      table.fold_of[{e.row, e.col}] = f;
    }
  }
  return table;
}

// CSV export: user_token, item_token, rating, timestamp, fold, score.
// Rows follow matrix entry order; an absent timestamp prints empty.
inline void write_scores_csv(std::ostream& out, const SparseMatrix& matrix,
                             const ScoreTable& table) {
  out << "user,item,rating,timestamp,fold,score\n";
  for (const auto& e : matrix.entries()) {
    Position pos{e.row, e.col};
    auto s = table.scores.find(pos);
    auto f = table.fold_of.find(pos);
    if (s == table.scores.end() || f == table.fold_of.end())
      throw DataError("score table does not cover every matrix entry");
    out << matrix.row_token(e.row) << ',' << matrix.col_token(e.col) << ','
        << format_double(e.value) << ',';
    if (e.timestamp != kNoTimestamp) out << e.timestamp;
    out << ',' << f->second << ',' << format_double(s->second) << '\n';
  }
}

// Reads a score CSV back into the matrix it was produced from plus its score
// table. Fold indices and scores ride on the extra columns.
struct LoadedScores {
  SparseMatrix matrix;
  ScoreTable table;
};

inline LoadedScores read_scores_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = false;
  InteractionSet records;
  std::vector<std::size_t> folds;
  std::vector<double> scores;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    auto fields = detail::split_line(line, ',');
    if (fields.size() != 6)
      throw ParseError("score row must have 6 columns", line_no);
    InteractionRecord rec;
    rec.user_id = std::string(fields[0]);
    rec.item_id = std::string(fields[1]);
    if (rec.user_id.empty() || rec.item_id.empty())
      throw ParseError("empty user or item token", line_no);
    rec.rating = detail::parse_double(fields[2], line_no, "rating");
    if (!fields[3].empty())
      rec.timestamp = detail::parse_i64(fields[3], line_no, "timestamp");
    auto fold = detail::parse_i64(fields[4], line_no, "fold");
    if (fold < 0) throw ParseError("negative fold index", line_no);
    double score = detail::parse_double(fields[5], line_no, "score");
    records.push_back(std::move(rec));
    folds.push_back(static_cast<std::size_t>(fold));
    scores.push_back(score);
  }
  if (records.empty()) throw DataError("score file contains no rows");
  LoadedScores out{build_matrix(records, DedupPolicy::keep_last_by_timestamp),
                   {}};
  if (out.matrix.nnz() != records.size())
    throw DataError("score file contains duplicate (user, item) rows");
  std::unordered_map<std::string, std::uint32_t> umap, imap;
  for (std::uint32_t r = 0; r < out.matrix.n_rows(); ++r)
    umap[out.matrix.row_token(r)] = r;
  for (std::uint32_t c = 0; c < out.matrix.n_cols(); ++c)
    imap[out.matrix.col_token(c)] = c;
  std::size_t max_fold = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    Position pos{umap.at(records[i].user_id), imap.at(records[i].item_id)};
    out.table.scores[pos] = scores[i];
    out.table.fold_of[pos] = folds[i];
    max_fold = std::max(max_fold, folds[i]);
  }
  out.table.n_folds = max_fold + 1;
  return out;
}

}  // namespace scx
