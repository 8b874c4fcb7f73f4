#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "scx/error.hpp"
#include "scx/rng.hpp"
#include "scx/sparse_matrix.hpp"

namespace scx {

struct SubsampleParams {
  std::size_t n_target = 100000;
  std::size_t min_user_interactions = 5;
  std::size_t min_item_interactions = 2;
  std::uint64_t seed = 0;
  std::size_t n_samples = 3;

  void validate() const {
    if (n_target < 1 || min_user_interactions < 1 ||
        min_item_interactions < 1 || n_samples < 1)
      throw ArgumentError("subsample counts must be >= 1");
  }
};

struct SubsampleProvenance {
  std::size_t input_entries = 0;
  std::size_t input_users = 0;
  double mean_interactions_original = 0.0;
  std::size_t users_below_min = 0;
  double mean_interactions_filtered = 0.0;
  std::size_t users_sampled = 0;
  bool user_sampling_skipped = false;
  std::size_t entries_after_user_sampling = 0;
  std::size_t pruning_rounds = 0;
  std::size_t entries_pruned = 0;
  std::size_t users_emptied_by_pruning = 0;
  std::size_t saturated_users_injected = 0;
  std::size_t saturated_users_removed = 0;
  std::size_t entries_injected = 0;
  std::size_t entries_truncated = 0;
  std::size_t injected_truncated = 0;
  std::size_t output_entries = 0;
  std::size_t output_users = 0;
  std::size_t output_items = 0;
  std::size_t post_truncation_item_violations = 0;
};

struct SubsampleResult {
  SparseMatrix matrix;
  SubsampleProvenance provenance;
  // Intermediate snapshots, kept so the per-step postconditions (pruning
  // fixpoint, saturation) stay checkable after truncation reshapes the output.
  std::vector<Entry> after_pruning;
  std::vector<Entry> after_saturation;
};

// Target-budget subsampler. In order: (1) drop users below the interaction
// floor and uniformly sample enough of the rest to land near n_target by
// expectation; (2) iteratively prune under-supported items to a fixpoint,
// dropping emptied users; (3) enforce that no user covers the whole item set,
// injecting that user's unseen interactions from the original log or removing
// the user; (4) randomly truncate down to n_target, keeping injected entries
// for last.
inline SubsampleResult subsample_dataset(const SparseMatrix& m,
                                         const SubsampleParams& params) {
  params.validate();
  if (m.nnz() == 0) throw DataError("subsample: input matrix is empty");
  Rng rng(mix_seed(params.seed, 0x73756273));  // "subs" stream

  SubsampleProvenance prov;
  prov.input_entries = m.nnz();

  // per-user entry indices in the original matrix
  std::vector<std::uint32_t> users_with_entries;
  for (std::uint32_t r = 0; r < m.n_rows(); ++r)
    if (m.row_ptr()[r + 1] > m.row_ptr()[r]) users_with_entries.push_back(r);
  prov.input_users = users_with_entries.size();
  prov.mean_interactions_original =
      static_cast<double>(m.nnz()) / static_cast<double>(prov.input_users);

  // step 1: user floor, then uniform user sampling toward the budget
  std::vector<std::uint32_t> eligible;
  std::size_t eligible_entries = 0;
  for (std::uint32_t r : users_with_entries) {
    std::size_t c = m.row_ptr()[r + 1] - m.row_ptr()[r];
    if (c >= params.min_user_interactions) {
      eligible.push_back(r);
      eligible_entries += c;
    }
  }
  prov.users_below_min = prov.input_users - eligible.size();
  if (eligible.empty())
    throw DataError("subsample: no user meets the interaction floor");
  prov.mean_interactions_filtered = static_cast<double>(eligible_entries) /
                                    static_cast<double>(eligible.size());

  std::vector<std::uint32_t> chosen_users;
  if (eligible_entries <= params.n_target) {
    prov.user_sampling_skipped = true;
    chosen_users = eligible;
  } else {
    auto want = static_cast<std::size_t>(std::llround(
        static_cast<double>(params.n_target) / prov.mean_interactions_filtered));
    want = std::clamp<std::size_t>(want, 1, eligible.size());
    auto picks = rng.sample_indices(eligible.size(), want);
    std::sort(picks.begin(), picks.end());
    for (auto i : picks) chosen_users.push_back(eligible[i]);
  }
  prov.users_sampled = chosen_users.size();

  // the working sample: entry indices into m, plus an injected flag
  std::vector<std::size_t> sample;
  for (std::uint32_t r : chosen_users)
    for (std::size_t i = m.row_ptr()[r]; i < m.row_ptr()[r + 1]; ++i)
      sample.push_back(i);
  prov.entries_after_user_sampling = sample.size();
  std::unordered_set<std::size_t> injected;

  const auto& entries = m.entries();

  // step 2: iterative item pruning to a fixpoint
  while (true) {
    std::unordered_map<std::uint32_t, std::size_t> item_support;
    for (std::size_t i : sample) ++item_support[entries[i].col];
    std::size_t before = sample.size();
    std::erase_if(sample, [&](std::size_t i) {
      return item_support[entries[i].col] < params.min_item_interactions;
    });
    if (sample.size() == before) break;
    ++prov.pruning_rounds;
    prov.entries_pruned += before - sample.size();
  }
  {
    std::unordered_set<std::uint32_t> left;
    for (std::size_t i : sample) left.insert(entries[i].row);
    prov.users_emptied_by_pruning = 0;
    for (std::uint32_t r : chosen_users)
      if (!left.contains(r)) ++prov.users_emptied_by_pruning;
  }
  if (sample.empty())
    throw DataError("subsample: item pruning removed every interaction");
  std::vector<Entry> step2_snapshot;
  step2_snapshot.reserve(sample.size());
  for (std::size_t i : sample) step2_snapshot.push_back(entries[i]);

  // step 3: saturation; every user must see strictly fewer items than the
  // sample's item universe
  while (true) {
    std::unordered_set<std::uint32_t> item_universe;
    std::unordered_map<std::uint32_t, std::size_t> user_items;
    std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>>
        user_seen;
    for (std::size_t i : sample) {
      item_universe.insert(entries[i].col);
      ++user_items[entries[i].row];
      user_seen[entries[i].row].insert(entries[i].col);
    }
    std::uint32_t violator = 0;
    bool found = false;
    for (const auto& [r, c] : user_items)
      if (c >= item_universe.size() && (!found || r < violator)) {
        violator = r;
        found = true;
      }
    if (!found) break;
    // unseen original interactions of this user, in column order
    std::vector<std::size_t> candidates;
    const auto& seen = user_seen[violator];
    for (std::size_t i = m.row_ptr()[violator];
         i < m.row_ptr()[violator + 1]; ++i)
      if (!seen.contains(entries[i].col)) candidates.push_back(i);
    if (candidates.empty()) {
      std::erase_if(sample,
                    [&](std::size_t i) { return entries[i].row == violator; });
      std::erase_if(injected,
                    [&](std::size_t i) { return entries[i].row == violator; });
      ++prov.saturated_users_removed;
      if (sample.empty())
        throw DataError("subsample: saturation check removed every user");
      continue;
    }
    std::size_t pick = candidates[rng.next_below(candidates.size())];
    sample.push_back(pick);
    injected.insert(pick);
    ++prov.entries_injected;
    ++prov.saturated_users_injected;
  }

  std::vector<Entry> step3_snapshot;
  step3_snapshot.reserve(sample.size());
  for (std::size_t i : sample) step3_snapshot.push_back(entries[i]);

  // step 4: random truncation to the budget, injected entries last
  if (sample.size() > params.n_target) {
    std::size_t n_remove = sample.size() - params.n_target;
    std::vector<std::size_t> plain, inj;
    for (std::size_t i : sample)
      (injected.contains(i) ? inj : plain).push_back(i);
    std::vector<std::size_t> kept;
    if (n_remove <= plain.size()) {
      auto drop = rng.sample_indices(plain.size(), n_remove);
      std::vector<bool> dead(plain.size(), false);
      for (auto d : drop) dead[d] = true;
      for (std::size_t j = 0; j < plain.size(); ++j)
        if (!dead[j]) kept.push_back(plain[j]);
      kept.insert(kept.end(), inj.begin(), inj.end());
    } else {
      std::size_t from_inj = n_remove - plain.size();
      prov.injected_truncated = from_inj;
      auto drop = rng.sample_indices(inj.size(), from_inj);
      std::vector<bool> dead(inj.size(), false);
      for (auto d : drop) dead[d] = true;
      for (std::size_t j = 0; j < inj.size(); ++j)
        if (!dead[j]) kept.push_back(inj[j]);
    }
    prov.entries_truncated = sample.size() - kept.size();
    sample = std::move(kept);
  }
  if (sample.empty()) throw DataError("subsample: truncation emptied the sample");

  std::vector<Entry> out_entries;
  out_entries.reserve(sample.size());
  for (std::size_t i : sample) out_entries.push_back(entries[i]);
  SparseMatrix out = m.with_entries(std::move(out_entries));

  prov.output_entries = out.nnz();
  {
    std::unordered_set<std::uint32_t> us, is;
    std::unordered_map<std::uint32_t, std::size_t> item_support;
    for (const auto& e : out.entries()) {
      us.insert(e.row);
      is.insert(e.col);
      ++item_support[e.col];
    }
    prov.output_users = us.size();
    prov.output_items = is.size();
    for (const auto& [item, c] : item_support)
      if (c < params.min_item_interactions)
        ++prov.post_truncation_item_violations;
  }
  return SubsampleResult{std::move(out), prov, std::move(step2_snapshot),
                         std::move(step3_snapshot)};
}

inline nlohmann::json to_json(const SubsampleProvenance& p) {
  return nlohmann::json{
      {"input_entries", p.input_entries},
      {"input_users", p.input_users},
      {"mean_interactions_original", p.mean_interactions_original},
      {"users_below_min", p.users_below_min},
      {"mean_interactions_filtered", p.mean_interactions_filtered},
      {"users_sampled", p.users_sampled},
      {"user_sampling_skipped", p.user_sampling_skipped},
      {"entries_after_user_sampling", p.entries_after_user_sampling},
      {"pruning_rounds", p.pruning_rounds},
      {"entries_pruned", p.entries_pruned},
      {"users_emptied_by_pruning", p.users_emptied_by_pruning},
      {"saturated_users_injected", p.saturated_users_injected},
      {"saturated_users_removed", p.saturated_users_removed},
      {"entries_injected", p.entries_injected},
      {"entries_truncated", p.entries_truncated},
      {"injected_truncated", p.injected_truncated},
      {"output_entries", p.output_entries},
      {"output_users", p.output_users},
      {"output_items", p.output_items},
      {"post_truncation_item_violations", p.post_truncation_item_violations}};
}

}  // namespace scx
