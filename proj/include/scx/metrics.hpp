#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "scx/error.hpp"
#include "scx/perturbation.hpp"
#include "scx/sparse_matrix.hpp"
#include "scx/svd.hpp"
#include "scx/version.hpp"

namespace scx {

namespace detail {

// Kahan compensated accumulator; perturbation sets can reach 1e7 entries.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace detail

struct DeltaSigma {
  std::vector<double> values;
  std::size_t clamped_count = 0;
};

struct ComplexityReport {
  double rmse = 0.0;
  double rmse_svd = 0.0;
  double rmse_sc = 0.0;
  double d_sc = 0.0;
  PerturbationParams params;
  std::size_t k = 0;
  std::size_t n_pert = 0;
  std::size_t clamped_count = 0;
};

// Singular-value correction from the Gramian diagonal difference:
// g_i = ((MV)^T MV - (M^P V)^T M^P V)_ii, computed column by column so the
// m x m Gramians are never formed, then
// delta_i = sqrt(max(0, sigma_i^2 + g_i)) - sigma_i.
// A diagonal difference that is exactly zero short-circuits to delta_i = 0,
// so an unperturbed matrix yields an exactly zero correction.
inline DeltaSigma delta_sigma(const SparseMatrix& original,
                              const SparseMatrix& perturbed,
                              const SvdFactors& factors) {
  if (original.n_rows() != perturbed.n_rows() ||
      original.n_cols() != perturbed.n_cols())
    throw ArgumentError("delta_sigma: matrix dimensions differ");
  if (factors.v.rows != original.n_cols() || factors.u.rows != original.n_rows())
    throw ArgumentError("delta_sigma: factors do not match matrix dimensions");
  const std::size_t k = factors.k;
  DenseMat mv = project_columns(original, factors.v);
  DenseMat mpv = project_columns(perturbed, factors.v);
  DeltaSigma out;
  out.values.assign(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    detail::KahanSum a, b;
    const double* x = mv.col(r);
    const double* y = mpv.col(r);
    for (std::size_t i = 0; i < mv.rows; ++i) {
      a.add(x[i] * x[i]);
      b.add(y[i] * y[i]);
    }
    double g = a.value() - b.value();
    if (g == 0.0) continue;
    double sigma = factors.sigma[r];
    double arg = sigma * sigma + g;
    if (arg < 0.0) {
      arg = 0.0;
      ++out.clamped_count;
    }
    out.values[r] = std::sqrt(arg) - sigma;
  }
  return out;
}

// Evaluates M~ = U (Sigma + DeltaSigma) V^T at the given positions, one cell
// at a time; the dense reconstruction is never materialized.
inline std::vector<double> predict_entries(const SvdFactors& factors,
                                           const DeltaSigma& correction,
                                           const EntrySet& positions) {
  const std::size_t k = factors.k;
  if (correction.values.size() != k)
    throw ArgumentError("predict_entries: correction length differs from k");
  std::vector<double> s(k);
  for (std::size_t r = 0; r < k; ++r)
    s[r] = factors.sigma[r] + correction.values[r];
  std::vector<double> out;
  out.reserve(positions.positions.size());
  for (const auto& pos : positions.positions) {
    if (pos.row >= factors.u.rows || pos.col >= factors.v.rows)
      throw ArgumentError("predict_entries: position out of bounds");
    double acc = 0.0;
    for (std::size_t r = 0; r < k; ++r)
      acc += factors.u.at(pos.row, r) * s[r] * factors.v.at(pos.col, r);
    out.push_back(acc);
  }
  return out;
}

// Root mean squared residual against the original matrix; cells outside its
// observed set read as zero, so vacated positions compare against the rating
// that was relocated away and filled positions compare against zero.
inline double rmse_on(const SparseMatrix& original,
                      const std::vector<double>& predictions,
                      const EntrySet& positions) {
  if (positions.positions.empty())
    throw ArgumentError("rmse_on: empty position set");
  if (predictions.size() != positions.positions.size())
    throw ArgumentError("rmse_on: prediction/position count mismatch");
  detail::KahanSum acc;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& pos = positions.positions[i];
    if (pos.row >= original.n_rows() || pos.col >= original.n_cols())
      throw ArgumentError("rmse_on: position out of bounds");
    double r = original.value_at(pos.row, pos.col) - predictions[i];
    acc.add(r * r);
  }
  return std::sqrt(acc.value() / static_cast<double>(predictions.size()));
}

inline double spectral_distance(const DeltaSigma& correction, std::size_t k) {
  if (k < 1 || correction.values.size() != k)
    throw ArgumentError("spectral_distance: correction length differs from k");
  detail::KahanSum acc;
  for (double v : correction.values) acc.add(std::abs(v));
  return acc.value() / static_cast<double>(k);
}

// Full pipeline: plan, perturb, factor the perturbed matrix, correct its
// spectrum, score the corrected reconstruction on the perturbed set, and
// normalize by the plain rank-k reconstruction of the original matrix on the
// same set.
inline ComplexityReport complexity_report(const SparseMatrix& matrix,
                                          const PerturbationParams& params,
                                          std::size_t k,
                                          const SvdQuality& quality = {}) {
  PerturbationPlan plan = select_perturbation_sets(matrix, params);
  SparseMatrix perturbed = apply_perturbation(matrix, plan);
  EntrySet omega_pert = plan.perturbed_set();

  SvdFactors factors_p = truncated_svd(perturbed, k, quality);
  DeltaSigma correction = delta_sigma(matrix, perturbed, factors_p);
  std::vector<double> pred = predict_entries(factors_p, correction, omega_pert);
  double rmse = rmse_on(matrix, pred, omega_pert);

  SvdFactors factors_o = truncated_svd(matrix, k, quality);
  DeltaSigma zero;
  zero.values.assign(k, 0.0);
  std::vector<double> base = predict_entries(factors_o, zero, omega_pert);
  double rmse_svd = rmse_on(matrix, base, omega_pert);

  ComplexityReport rep;
  rep.rmse = rmse;
  rep.rmse_svd = rmse_svd;
  rep.params = params;
  rep.k = k;
  rep.n_pert = omega_pert.positions.size();
  rep.clamped_count = correction.clamped_count;
  rep.d_sc = spectral_distance(correction, k);
  if (rmse_svd <= 0.0)
    throw RatioUndefinedError(
        "complexity_report: baseline reconstruction error is zero", rmse);
  rep.rmse_sc = rmse / rmse_svd;
  return rep;
}

inline nlohmann::json to_json(const ComplexityReport& rep) {
  return nlohmann::json{{"rmse", rep.rmse},
                        {"rmse_svd", rep.rmse_svd},
                        {"rmse_sc", rep.rmse_sc},
                        {"d_sc", rep.d_sc},
                        {"k", rep.k},
                        {"n_pert", rep.n_pert},
                        {"clamped_count", rep.clamped_count},
                        {"params", to_json(rep.params)},
                        {"version", kVersion}};
}

}  // namespace scx
