#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "scx/error.hpp"
#include "scx/numeric.hpp"
#include "scx/rng.hpp"
#include "scx/sparse_matrix.hpp"

#include "json.hpp"

namespace scx {

struct PerturbationParams {
  double p = 0.1;        // total perturbation fraction, in (0,1)
  double alpha = 0.7;    // value-perturbation ratio, in [0,1]
  bool time_weighted = false;
  double epsilon = 1e-9;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("p must lie in (0,1)");
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw ArgumentError("alpha must lie in [0,1]");
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  }
};

struct PerturbationPlan {
  EntrySet omega_val{EntrySetKind::val, {}};
  EntrySet omega_remove{EntrySetKind::remove, {}};
  EntrySet omega_add{EntrySetKind::add, {}};
  // value_permutation[i] = index j within omega_val whose original value the
  // i-th value-perturbed cell receives.
  std::vector<std::size_t> value_permutation;
  // relocation pairs omega_remove[i] -> omega_add[i]; the moved entry keeps
  // its rating value.
  PerturbationParams params;

  std::size_t n_perturbed() const {
    return omega_val.size() + omega_remove.size() + omega_add.size();
  }

  bool empty() const { return n_perturbed() == 0; }

  // Union of all perturbed positions, in (val, remove, add) order.
  EntrySet perturbed_set() const {
    EntrySet s{EntrySetKind::pert, {}};
    s.positions.reserve(n_perturbed());
    for (const auto& p : omega_val.positions) s.positions.push_back(p);
    for (const auto& p : omega_remove.positions) s.positions.push_back(p);
    for (const auto& p : omega_add.positions) s.positions.push_back(p);
    return s;
  }
};

// Selection probabilities proportional to (t - t_min)/(t_max - t_min + eps).
// Uniform timestamps make every raw weight zero; the fallback is then the
// uniform distribution and `uniform_fallback` is set.
struct TimeWeights {
  std::vector<double> weights;
  bool uniform_fallback = false;
};

inline TimeWeights time_weights(const std::vector<std::int64_t>& timestamps,
                                double epsilon) {
  if (timestamps.empty()) throw ArgumentError("time_weights: empty sequence");
  if (!(epsilon > 0.0)) throw ArgumentError("time_weights: epsilon must be positive");
  auto [mn, mx] = std::minmax_element(timestamps.begin(), timestamps.end());
  double t_min = static_cast<double>(*mn);
  double t_max = static_cast<double>(*mx);
  TimeWeights tw;
  tw.weights.resize(timestamps.size());
  double denom = t_max - t_min + epsilon;
  double sum = 0.0;
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    tw.weights[i] = (static_cast<double>(timestamps[i]) - t_min) / denom;
    sum += tw.weights[i];
  }
  if (sum == 0.0) {
    tw.uniform_fallback = true;
    double u = 1.0 / static_cast<double>(timestamps.size());
    for (auto& w : tw.weights) w = u;
    return tw;
  }
  for (auto& w : tw.weights) w /= sum;
  return tw;
}

namespace detail {

// Weighted sampling without replacement via exponential-race keys
// (key = -ln(u)/w, smallest keys win). Zero-weight entries never race;
// if the quota cannot be filled from positive weights, the remainder is
// drawn uniformly from the zero-weight pool.
inline std::vector<std::size_t> weighted_sample_without_replacement(
    const std::vector<double>& weights, std::size_t quota, Rng& rng) {
  std::size_t n = weights.size();
  if (quota > n) throw ArgumentError("weighted sample: quota exceeds population");
  std::vector<std::pair<double, std::size_t>> keys;
  std::vector<std::size_t> zeros;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_positive_double();
    if (weights[i] > 0.0)
      keys.emplace_back(-std::log(u) / weights[i], i);
    else
      zeros.push_back(i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::size_t> out;
  out.reserve(quota);
  for (std::size_t i = 0; i < keys.size() && out.size() < quota; ++i)
    out.push_back(keys[i].second);
  if (out.size() < quota) {
    std::size_t need = quota - out.size();
    auto picks = rng.sample_indices(zeros.size(), need);
    for (auto p : picks) out.push_back(zeros[p]);
  }
  return out;
}

// Uniform positions from the zero-entry complement, by rejection against the
// membership index (the complement is never materialized). Retry budget is
// 100x the quota.
inline std::vector<Position> sample_complement_positions(const SparseMatrix& m,
                                                         std::size_t quota,
                                                         Rng& rng) {
  const std::uint64_t complement_size =
      static_cast<std::uint64_t>(m.n_rows()) * m.n_cols() - m.nnz();
  if (complement_size < quota)
    throw DataError("cannot relocate: zero-entry complement is too small");
  std::vector<Position> added;
  added.reserve(quota);
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(quota * 2);
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = 100ULL * quota;
  while (added.size() < quota) {
    if (attempts++ >= max_attempts)
      throw DataError("cannot relocate: rejection sampling retry budget exhausted");
    auto r = static_cast<std::uint32_t>(rng.next_below(m.n_rows()));
    auto c = static_cast<std::uint32_t>(rng.next_below(m.n_cols()));
    std::uint64_t key = (static_cast<std::uint64_t>(r) << 32) | c;
    if (m.contains(r, c) || taken.contains(key)) continue;
    taken.insert(key);
    added.push_back({r, c});
  }
  return added;
}

}  // namespace detail

// Step 1 of the analysis: choose the disjoint value / remove / add sets and
// the seeded value permutation.
inline PerturbationPlan select_perturbation_sets(const SparseMatrix& m,
                                                 const PerturbationParams& params) {
  params.validate();
  const std::size_t n_obs = m.nnz();
  const std::size_t quota_total =
      floor_count(params.p * static_cast<double>(n_obs));
  if (quota_total < 1)
    throw ArgumentError("perturbation quota floor(p*|Omega|) must be >= 1");
  const std::size_t n_val =
      floor_count(params.alpha * params.p * static_cast<double>(n_obs));
  const std::size_t n_rem =
      floor_count((1.0 - params.alpha) * params.p * static_cast<double>(n_obs));
  if (n_val + n_rem > n_obs)
    throw ArgumentError("perturbation quotas exceed observed entry count");

  const std::uint64_t complement_size =
      static_cast<std::uint64_t>(m.n_rows()) * m.n_cols() - n_obs;
  if (complement_size < n_rem)
    throw DataError("cannot relocate: zero-entry complement is too small");

  PerturbationPlan plan;
  plan.params = params;

  Rng rng(mix_seed(params.seed, 0x70657274));  // "pert" stream

  // joint draw from Omega, first n_val are value cells, next n_rem removals
  std::vector<std::size_t> chosen;
  if (params.time_weighted) {
    if (!m.has_timestamps())
      throw DataError("time-weighted sampling requires timestamps on every entry");
    std::vector<std::int64_t> ts(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) ts[i] = m.entries()[i].timestamp;
    auto tw = time_weights(ts, params.epsilon);
    chosen = detail::weighted_sample_without_replacement(tw.weights,
                                                         n_val + n_rem, rng);
  } else {
    chosen = rng.sample_indices(n_obs, n_val + n_rem);
  }

  plan.omega_val.positions.reserve(n_val);
  for (std::size_t i = 0; i < n_val; ++i) {
    const Entry& e = m.entries()[chosen[i]];
    plan.omega_val.positions.push_back({e.row, e.col});
  }
  plan.omega_remove.positions.reserve(n_rem);
  for (std::size_t i = n_val; i < n_val + n_rem; ++i) {
    const Entry& e = m.entries()[chosen[i]];
    plan.omega_remove.positions.push_back({e.row, e.col});
  }

  // Fisher-Yates permutation of the value cells
  plan.value_permutation.resize(n_val);
  for (std::size_t i = 0; i < n_val; ++i) plan.value_permutation[i] = i;
  rng.shuffle(plan.value_permutation);

  if (n_rem > 0)
    plan.omega_add.positions = detail::sample_complement_positions(m, n_rem, rng);
  return plan;
}

// Applies a plan built from `m`, producing M^P. Sparsity count is preserved:
// shuffled cells keep their positions, removed entries reappear at the add
// positions carrying their original values (and timestamps).
inline SparseMatrix apply_perturbation(const SparseMatrix& m,
                                       const PerturbationPlan& plan) {
  std::vector<Entry> entries = m.entries();
  // permute values among the value cells
  const std::size_t n_val = plan.omega_val.size();
  std::vector<double> vals(n_val);
  for (std::size_t i = 0; i < n_val; ++i) {
    auto idx = m.find(plan.omega_val.positions[i].row,
                      plan.omega_val.positions[i].col);
    if (!idx) throw ArgumentError("plan value cell not present in matrix");
    vals[i] = entries[*idx].value;
  }
  for (std::size_t i = 0; i < n_val; ++i) {
    auto idx = m.find(plan.omega_val.positions[i].row,
                      plan.omega_val.positions[i].col);
    entries[*idx].value = vals[plan.value_permutation[i]];
  }
  // relocate removed entries to their add positions
  const std::size_t n_rem = plan.omega_remove.size();
  if (n_rem != plan.omega_add.size())
    throw ArgumentError("plan remove/add sets differ in size");
  std::vector<std::size_t> removed_idx(n_rem);
  for (std::size_t i = 0; i < n_rem; ++i) {
    auto idx = m.find(plan.omega_remove.positions[i].row,
                      plan.omega_remove.positions[i].col);
    if (!idx) throw ArgumentError("plan removal cell not present in matrix");
    removed_idx[i] = *idx;
  }
  std::vector<bool> drop(entries.size(), false);
  std::vector<Entry> moved(n_rem);
  for (std::size_t i = 0; i < n_rem; ++i) {
    const Entry& src = entries[removed_idx[i]];
    moved[i] = Entry{plan.omega_add.positions[i].row,
                     plan.omega_add.positions[i].col, src.value, src.timestamp};
    drop[removed_idx[i]] = true;
  }
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (!drop[i]) out.push_back(entries[i]);
  for (auto& e : moved) out.push_back(e);
  return m.with_entries(std::move(out));
}

// --- JSON audit form -------------------------------------------------------

inline nlohmann::json to_json(const EntrySet& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : s.positions) arr.push_back({p.row, p.col});
  return arr;
}

inline nlohmann::json to_json(const PerturbationParams& params) {
  return nlohmann::json{{"p", params.p},
                        {"alpha", params.alpha},
                        {"time_weighted", params.time_weighted},
                        {"epsilon", params.epsilon},
                        {"seed", params.seed}};
}

inline nlohmann::json to_json(const PerturbationPlan& plan) {
  nlohmann::json j;
  j["omega_val"] = to_json(plan.omega_val);
  j["omega_remove"] = to_json(plan.omega_remove);
  j["omega_add"] = to_json(plan.omega_add);
  j["value_permutation"] = plan.value_permutation;
  j["params"] = to_json(plan.params);
  return j;
}

}  // namespace scx
