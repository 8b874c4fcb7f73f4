#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "scx/error.hpp"
#include "scx/rng.hpp"
#include "scx/sparse_matrix.hpp"

namespace scx {

// Column-major dense matrix, just enough for the factor blocks.
struct DenseMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // column-major

  DenseMat() = default;
  DenseMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[j * rows + i]; }
  double at(std::size_t i, std::size_t j) const { return a[j * rows + i]; }
  double* col(std::size_t j) { return a.data() + j * rows; }
  const double* col(std::size_t j) const { return a.data() + j * rows; }
};

struct SvdQuality {
  std::size_t oversampling = 10;
  std::size_t power_iterations = 4;
  std::uint64_t seed = 0;
};

struct SvdFactors {
  DenseMat u;                  // n x k, column-orthonormal
  std::vector<double> sigma;   // length k, non-increasing, >= 0
  DenseMat v;                  // m x k, column-orthonormal
  std::size_t k = 0;
};

// Exact sparse-dense product M * V with deterministic summation order
// (entries visited in CSR order).
inline DenseMat project_columns(const SparseMatrix& m, const DenseMat& v) {
  if (v.rows != m.n_cols())
    throw ArgumentError("project_columns: dimension mismatch");
  DenseMat out(m.n_rows(), v.cols);
  for (std::size_t c = 0; c < v.cols; ++c) {
    const double* vc = v.col(c);
    double* oc = out.col(c);
    for (const auto& e : m.entries()) oc[e.row] += e.value * vc[e.col];
  }
  return out;
}

// M^T * X, same determinism contract.
inline DenseMat project_columns_transposed(const SparseMatrix& m,
                                           const DenseMat& x) {
  if (x.rows != m.n_rows())
    throw ArgumentError("project_columns_transposed: dimension mismatch");
  DenseMat out(m.n_cols(), x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) {
    const double* xc = x.col(c);
    double* oc = out.col(c);
    for (const auto& e : m.entries()) oc[e.col] += e.value * xc[e.row];
  }
  return out;
}

namespace detail {

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// Cyclic Jacobi eigensolver for a symmetric matrix held column-major.
// Returns eigenvalues (descending) and the matching eigenvector columns.
inline void jacobi_eigh(std::size_t n, std::vector<double> a,
                        std::vector<double>& eigvals,
                        std::vector<double>& eigvecs) {
  eigvecs.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eigvecs[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[j * n + i]; };
  auto V = [&](std::size_t i, std::size_t j) -> double& {
    return eigvecs[j * n + i];
  };
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) off += A(i, j) * A(i, j);
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag += A(i, i) * A(i, i);
    if (off <= 1e-30 * (diag + 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (apq == 0.0) continue;
        double app = A(p, p), aqq = A(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * viq;
          V(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  // sort descending by eigenvalue, stable on ties
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });
  eigvals.resize(n);
  std::vector<double> sorted_vecs(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    eigvals[r] = a[order[r] * n + order[r]];
    std::copy(eigvecs.begin() + static_cast<std::ptrdiff_t>(order[r] * n),
              eigvecs.begin() + static_cast<std::ptrdiff_t>((order[r] + 1) * n),
              sorted_vecs.begin() + static_cast<std::ptrdiff_t>(r * n));
  }
  eigvecs = std::move(sorted_vecs);
}

// Grows an orthonormal basis: orthogonalizes the columns of `block` against
// `basis` and among themselves (two MGS passes), appending the survivors.
// Columns whose norm collapses below drop_tol times their input norm are
// discarded. Returns the number of accepted columns.
inline std::size_t append_orthonormal_block(DenseMat& basis, DenseMat& block,
                                            std::size_t max_cols,
                                            double drop_tol = 1e-10) {
  const std::size_t n = block.rows;
  std::size_t accepted = 0;
  for (std::size_t c = 0; c < block.cols; ++c) {
    if (basis.cols >= max_cols) break;
    double* y = block.col(c);
    double norm0 = std::sqrt(dot(y, y, n));
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < basis.cols; ++j) {
        const double* qj = basis.col(j);
        double proj = dot(qj, y, n);
        axpy(y, -proj, qj, n);
      }
    }
    double norm = std::sqrt(dot(y, y, n));
    if (norm < drop_tol * norm0) continue;
    basis.a.insert(basis.a.end(), y, y + n);
    double* q = basis.a.data() + basis.cols * n;
    for (std::size_t i = 0; i < n; ++i) q[i] /= norm;
    ++basis.cols;
    ++accepted;
  }
  return accepted;
}

}  // namespace detail

// Rank-k truncated SVD by a randomized block-Krylov subspace. The basis
// starts from power_iterations+1 blocks of M(M^T M)^t G and keeps growing
// until the top-k Ritz singular values stabilize, the subspace saturates
// min(n,m), or a growth cap is reached. Small problems (min dim <= 512) are
// allowed to saturate, which makes the factors exact up to roundoff.
inline SvdFactors truncated_svd(const SparseMatrix& m, std::size_t k,
                                const SvdQuality& quality = {}) {
  const std::size_t n = m.n_rows();
  const std::size_t cols = m.n_cols();
  const std::size_t mn = std::min<std::size_t>(n, cols);
  if (k < 1 || k > mn)
    throw ArgumentError("truncated_svd: k must lie in [1, min(n,m)]");
  if (!m.all_finite())
    throw NumericError("truncated_svd: matrix contains non-finite entries");

  const std::size_t l = std::min(k + quality.oversampling, mn);
  const std::size_t min_blocks = quality.power_iterations + 1;
  const std::size_t extra_cap = mn <= 512 ? static_cast<std::size_t>(-1) : 2;
  const double conv_tol = 1e-11;

  Rng rng(mix_seed(quality.seed, 0x73766432));

  // start block Y = M * G
  DenseMat g(cols, l);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < cols; ++i) g.at(i, j) = rng.next_normal();
  DenseMat y = project_columns(m, g);

  DenseMat basis(n, 0);          // Q, grows column blocks
  std::vector<double> b;         // B = Q^T M, stored row-major (D rows of m)
  std::vector<double> gram;      // W = B B^T, column-major D x D
  std::size_t d = 0;             // current subspace dimension

  std::vector<double> eigvals, eigvecs;
  std::vector<double> prev_sigma;
  bool have_eig = false;

  std::size_t n_blocks = 0;
  while (true) {
    std::size_t first_new = basis.cols;
    std::size_t added = detail::append_orthonormal_block(basis, y, mn);
    ++n_blocks;
    bool stalled = added == 0;
    if (!stalled) {
      // extend B with the new rows q_c^T M
      b.resize(basis.cols * cols, 0.0);
      for (std::size_t c = first_new; c < basis.cols; ++c) {
        double* row = b.data() + c * cols;
        const double* qc = basis.col(c);
        for (const auto& e : m.entries()) row[e.col] += e.value * qc[e.row];
      }
      // extend the Gram matrix W = B B^T
      std::size_t d_new = basis.cols;
      std::vector<double> gram_new(d_new * d_new, 0.0);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          gram_new[j * d_new + i] = gram[j * d + i];
      for (std::size_t j = d; j < d_new; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
          double s = detail::dot(b.data() + i * cols, b.data() + j * cols, cols);
          gram_new[j * d_new + i] = s;
          gram_new[i * d_new + j] = s;
        }
      }
      gram = std::move(gram_new);
      d = d_new;
    }

    bool saturated = d >= mn;
    bool need_sigma = n_blocks + 1 >= min_blocks || saturated || stalled;
    std::vector<double> sigma_now;
    if (need_sigma) {
      detail::jacobi_eigh(d, gram, eigvals, eigvecs);
      have_eig = true;
      sigma_now.resize(k, 0.0);
      for (std::size_t i = 0; i < k && i < d; ++i)
        sigma_now[i] = std::sqrt(std::max(0.0, eigvals[i]));
    }

    if (saturated || stalled) break;
    if (n_blocks >= min_blocks) {
      bool converged = false;
      if (!prev_sigma.empty()) {
        double scale = sigma_now.empty() ? 0.0 : sigma_now[0];
        converged = true;
        for (std::size_t i = 0; i < k; ++i)
          if (std::abs(sigma_now[i] - prev_sigma[i]) >
              conv_tol * (scale + 1e-300)) {
            converged = false;
            break;
          }
      }
      if (converged) break;
      if (extra_cap != static_cast<std::size_t>(-1) &&
          n_blocks >= min_blocks + extra_cap)
        break;
    }
    prev_sigma = sigma_now;

    // next block: M (M^T Q_new)
    DenseMat q_new(n, basis.cols - first_new);
    for (std::size_t c = first_new; c < basis.cols; ++c)
      std::copy(basis.col(c), basis.col(c) + n, q_new.col(c - first_new));
    DenseMat z = project_columns_transposed(m, q_new);
    y = project_columns(m, z);
  }

  if (!have_eig) detail::jacobi_eigh(d, gram, eigvals, eigvecs);

  SvdFactors f;
  f.k = k;
  f.sigma.assign(k, 0.0);
  f.u = DenseMat(n, k);
  f.v = DenseMat(cols, k);
  double sigma_top = d > 0 ? std::sqrt(std::max(0.0, eigvals[0])) : 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    double sigma_r = r < d ? std::sqrt(std::max(0.0, eigvals[r])) : 0.0;
    f.sigma[r] = sigma_r;
    if (r < d) {
      const double* w = eigvecs.data() + r * d;
      // U column = Q * w
      double* uc = f.u.col(r);
      for (std::size_t j = 0; j < d; ++j)
        detail::axpy(uc, w[j], basis.col(j), n);
      if (sigma_r > sigma_top * 1e-13 && sigma_r > 0.0) {
        // V column = B^T w / sigma
        double* vc = f.v.col(r);
        for (std::size_t j = 0; j < d; ++j)
          detail::axpy(vc, w[j], b.data() + j * cols, cols);
        for (std::size_t i = 0; i < cols; ++i) vc[i] /= sigma_r;
      }
    }
  }
  // Clean up V: re-orthonormalize in order; degenerate or missing columns
  // (sigma ~ 0) get a deterministic orthonormal completion from the
  // canonical basis. Same completion for U columns beyond the subspace rank.
  auto complete_column = [](DenseMat& mat, std::size_t col_idx) {
    const std::size_t rows = mat.rows;
    for (std::size_t t = 0; t < rows; ++t) {
      std::vector<double> e(rows, 0.0);
      e[t] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < col_idx; ++j) {
          double proj = detail::dot(mat.col(j), e.data(), rows);
          detail::axpy(e.data(), -proj, mat.col(j), rows);
        }
      double norm = std::sqrt(detail::dot(e.data(), e.data(), rows));
      if (norm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) mat.at(i, col_idx) = e[i] / norm;
        return;
      }
    }
    throw NumericError("orthonormal completion failed");
  };
  for (std::size_t r = 0; r < k; ++r) {
    double* vc = f.v.col(r);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < r; ++j) {
        double proj = detail::dot(f.v.col(j), vc, cols);
        detail::axpy(vc, -proj, f.v.col(j), cols);
      }
    double norm = std::sqrt(detail::dot(vc, vc, cols));
    if (norm > 1e-6) {
      for (std::size_t i = 0; i < cols; ++i) vc[i] /= norm;
    } else {
      complete_column(f.v, r);
    }
    if (r >= d) complete_column(f.u, r);
  }
  // sign convention: first coordinate of each U column with magnitude above
  // threshold is non-negative
  for (std::size_t r = 0; r < k; ++r) {
    double* uc = f.u.col(r);
    double* vc = f.v.col(r);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(uc[i]) > 1e-12) {
        if (uc[i] < 0.0) {
          for (std::size_t t = 0; t < n; ++t) uc[t] = -uc[t];
          for (std::size_t t = 0; t < cols; ++t) vc[t] = -vc[t];
        }
        break;
      }
    }
  }
  return f;
}

}  // namespace scx
