#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scx/error.hpp"
#include "scx/sparse_matrix.hpp"

namespace scx {

struct InteractionRecord {
  std::string user_id;
  std::string item_id;
  double rating = 0.0;
  std::int64_t timestamp = kNoTimestamp;
};

using InteractionSet = std::vector<InteractionRecord>;

// Column layout of a delimited interaction log. Column indices are
// zero-based; timestamp_col < 0 means the log carries no timestamps.
struct ColumnMapping {
  char delimiter = ',';
  bool has_header = false;
  int user_col = 0;
  int item_col = 1;
  int rating_col = 2;
  int timestamp_col = 3;  // set to -1 when absent
};

enum class DedupPolicy { keep_last_by_timestamp, mean };

// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace detail {

inline std::vector<std::string_view> split_line(std::string_view line,
                                                char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view s, std::size_t line_no,
                           const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("unparsable ") + what + " '" +
                         std::string(s) + "'",
                     line_no);
  return v;
}

inline std::int64_t parse_i64(std::string_view s, std::size_t line_no,
                              const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("unparsable ") + what + " '" +
                         std::string(s) + "'",
                     line_no);
  return v;
}

}  // namespace detail

// Parses a delimited interaction log. Records come back in input order;
// duplicate (user, item) pairs are retained at this stage.
inline InteractionSet load_interactions(std::istream& in,
                                        const ColumnMapping& map) {
  InteractionSet records;
  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = !map.has_header;
  int max_col = std::max({map.user_col, map.item_col, map.rating_col,
                          map.timestamp_col});
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;  // comment / embedded config echo
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    auto fields = detail::split_line(line, map.delimiter);
    if (static_cast<int>(fields.size()) <= max_col &&
        !(map.timestamp_col >= 0 &&
          static_cast<int>(fields.size()) == max_col &&
          map.timestamp_col == max_col))
      throw ParseError("row has too few columns", line_no);
    InteractionRecord rec;
    rec.user_id = std::string(fields[static_cast<std::size_t>(map.user_col)]);
    rec.item_id = std::string(fields[static_cast<std::size_t>(map.item_col)]);
    if (rec.user_id.empty() || rec.item_id.empty())
      throw ParseError("empty user or item token", line_no);
    rec.rating = detail::parse_double(
        fields[static_cast<std::size_t>(map.rating_col)], line_no, "rating");
    if (!std::isfinite(rec.rating))
      throw ParseError("non-finite rating", line_no);
    if (map.timestamp_col >= 0 &&
        static_cast<int>(fields.size()) > map.timestamp_col) {
      auto ts = fields[static_cast<std::size_t>(map.timestamp_col)];
      if (!ts.empty())
        rec.timestamp = detail::parse_i64(ts, line_no, "timestamp");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw DataError("input contains no interaction records");
  return records;
}

// Builds the deduplicated sparse matrix. Row/col indices are assigned in
// first-appearance order of the tokens.
inline SparseMatrix build_matrix(const InteractionSet& records,
                                 DedupPolicy policy) {
  if (records.empty()) throw DataError("cannot build matrix from zero records");
  std::unordered_map<std::string, std::uint32_t> user_index, item_index;
  std::vector<std::string> user_tokens, item_tokens;
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
    double last_value = 0.0;
    std::int64_t last_ts = kNoTimestamp;
    std::int64_t max_ts = kNoTimestamp;
    bool init = false;
  };
  std::unordered_map<std::uint64_t, Acc> cells;
  cells.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.user_id.empty() || rec.item_id.empty())
      throw DataError("record with empty user or item token");
    if (!std::isfinite(rec.rating)) throw DataError("record with non-finite rating");
    auto [uit, unew] = user_index.try_emplace(
        rec.user_id, static_cast<std::uint32_t>(user_tokens.size()));
    if (unew) user_tokens.push_back(rec.user_id);
    auto [iit, inew] = item_index.try_emplace(
        rec.item_id, static_cast<std::uint32_t>(item_tokens.size()));
    if (inew) item_tokens.push_back(rec.item_id);
    std::uint64_t key =
        (static_cast<std::uint64_t>(uit->second) << 32) | iit->second;
    Acc& a = cells[key];
    a.sum += rec.rating;
    ++a.count;
    // keep_last: later input wins on timestamp ties
    if (!a.init || rec.timestamp >= a.max_ts) {
      a.last_value = rec.rating;
      a.last_ts = rec.timestamp;
      a.max_ts = rec.timestamp;
    }
    a.init = true;
  }
  std::vector<Entry> entries;
  entries.reserve(cells.size());
  for (const auto& [key, a] : cells) {
    Entry e;
    e.row = static_cast<std::uint32_t>(key >> 32);
    e.col = static_cast<std::uint32_t>(key & 0xffffffffu);
    e.timestamp = a.last_ts;
    e.value =
        policy == DedupPolicy::mean ? a.sum / static_cast<double>(a.count)
                                    : a.last_value;
    entries.push_back(e);
  }
  auto n_rows = static_cast<std::uint32_t>(user_tokens.size());
  auto n_cols = static_cast<std::uint32_t>(item_tokens.size());
  return SparseMatrix(n_rows, n_cols, std::move(entries),
                      std::move(user_tokens), std::move(item_tokens));
}

// Interaction CSV in the ingestion schema: user,item,rating[,timestamp].
inline void write_interactions_csv(std::ostream& out, const SparseMatrix& m,
                                   bool with_timestamps = true) {
  out << "user,item,rating";
  if (with_timestamps) out << ",timestamp";
  out << "\n";
  for (const auto& e : m.entries()) {
    out << m.row_token(e.row) << ',' << m.col_token(e.col) << ','
        << format_double(e.value);
    if (with_timestamps) {
      out << ',';
      if (e.timestamp != kNoTimestamp) out << e.timestamp;
    }
    out << "\n";
  }
}

}  // namespace scx
