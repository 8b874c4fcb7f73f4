#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "scx/error.hpp"
#include "scx/sparse_matrix.hpp"
#include "scx/svd.hpp"

namespace scx {

namespace detail {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw DataError("binary cache: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline void write_f64(std::ostream& out, double d) {
  write_u64(out, std::bit_cast<std::uint64_t>(d));
}

inline double read_f64(std::istream& in) {
  return std::bit_cast<double>(read_u64(in));
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  std::uint64_t len = read_u64(in);
  if (len > (1u << 20)) throw DataError("binary cache: token too long");
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw DataError("binary cache: truncated stream");
  return s;
}

inline void expect_magic(std::istream& in, const char* magic) {
  char got[4];
  in.read(got, 4);
  if (!in || std::memcmp(got, magic, 4) != 0)
    throw DataError(std::string("binary cache: bad magic, expected ") + magic);
}

}  // namespace detail

inline constexpr char kMatrixMagic[5] = "SCM1";
inline constexpr char kFactorsMagic[5] = "SCF1";

// Matrix cache: "SCM1", u64 dims and count, CSR-order entry arrays
// (rows, cols, values, timestamps), then both token maps. Little-endian.
inline void write_matrix_cache(std::ostream& out, const SparseMatrix& m) {
  out.write(kMatrixMagic, 4);
  detail::write_u64(out, m.n_rows());
  detail::write_u64(out, m.n_cols());
  detail::write_u64(out, m.nnz());
  for (const auto& e : m.entries()) detail::write_u64(out, e.row);
  for (const auto& e : m.entries()) detail::write_u64(out, e.col);
  for (const auto& e : m.entries()) detail::write_f64(out, e.value);
  for (const auto& e : m.entries())
    detail::write_u64(out, static_cast<std::uint64_t>(e.timestamp));
  for (const auto& t : m.row_tokens()) detail::write_string(out, t);
  for (const auto& t : m.col_tokens()) detail::write_string(out, t);
  if (!out) throw DataError("binary cache: write failed");
}

inline SparseMatrix read_matrix_cache(std::istream& in) {
  detail::expect_magic(in, kMatrixMagic);
  auto n_rows = detail::read_u64(in);
  auto n_cols = detail::read_u64(in);
  auto nnz = detail::read_u64(in);
  if (n_rows > 0xffffffffULL || n_cols > 0xffffffffULL)
    throw DataError("binary cache: dimensions exceed 32-bit index range");
  std::vector<Entry> entries(nnz);
  for (auto& e : entries) e.row = static_cast<std::uint32_t>(detail::read_u64(in));
  for (auto& e : entries) e.col = static_cast<std::uint32_t>(detail::read_u64(in));
  for (auto& e : entries) e.value = detail::read_f64(in);
  for (auto& e : entries)
    e.timestamp = static_cast<std::int64_t>(detail::read_u64(in));
  std::vector<std::string> row_tokens(n_rows), col_tokens(n_cols);
  for (auto& t : row_tokens) t = detail::read_string(in);
  for (auto& t : col_tokens) t = detail::read_string(in);
  return SparseMatrix(static_cast<std::uint32_t>(n_rows),
                      static_cast<std::uint32_t>(n_cols), std::move(entries),
                      std::move(row_tokens), std::move(col_tokens));
}

// Factor cache: "SCF1", u64 n, m, k, then sigma, U (column-major), V
// (column-major), all f64 little-endian.
inline void write_factors_cache(std::ostream& out, const SvdFactors& f) {
  out.write(kFactorsMagic, 4);
  detail::write_u64(out, f.u.rows);
  detail::write_u64(out, f.v.rows);
  detail::write_u64(out, f.k);
  for (double s : f.sigma) detail::write_f64(out, s);
  for (double x : f.u.a) detail::write_f64(out, x);
  for (double x : f.v.a) detail::write_f64(out, x);
  if (!out) throw DataError("binary cache: write failed");
}

inline SvdFactors read_factors_cache(std::istream& in) {
  detail::expect_magic(in, kFactorsMagic);
  auto n = detail::read_u64(in);
  auto m = detail::read_u64(in);
  auto k = detail::read_u64(in);
  SvdFactors f;
  f.k = k;
  f.sigma.resize(k);
  for (auto& s : f.sigma) s = detail::read_f64(in);
  f.u = DenseMat(n, k);
  for (auto& x : f.u.a) x = detail::read_f64(in);
  f.v = DenseMat(m, k);
  for (auto& x : f.v.a) x = detail::read_f64(in);
  return f;
}

}  // namespace scx
