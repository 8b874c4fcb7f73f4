// sctool: structural-complexity analysis of interaction datasets.
// Subcommands: analyze, score, select, subsample, correlate.
// Exit codes: 0 success, 2 argument error, 3 data error, 4 numeric error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scx/cache.hpp"
#include "scx/error.hpp"
#include "scx/interactions.hpp"
#include "scx/metrics.hpp"
#include "scx/perturbation.hpp"
#include "scx/scoring.hpp"
#include "scx/selection.hpp"
#include "scx/sparse_matrix.hpp"
#include "scx/splits.hpp"
#include "scx/subsample.hpp"
#include "scx/svd.hpp"
#include "scx/version.hpp"

namespace {

using nlohmann::json;

struct InputOpts {
  std::string path;
  std::string delimiter = ",";
  bool no_header = false;
  int user_col = 0;
  int item_col = 1;
  int rating_col = 2;
  int timestamp_col = 3;
  bool no_timestamps = false;
  std::string dedup = "last";
};

void add_input_opts(CLI::App* cmd, InputOpts& opts) {
  cmd->add_option("--input", opts.path, "input interactions (CSV or SCM1 cache)")
      ->required();
  cmd->add_option("--delimiter", opts.delimiter, "field delimiter (default ,)");
  cmd->add_flag("--no-header", opts.no_header, "input has no header row");
  cmd->add_option("--user-col", opts.user_col, "user column index");
  cmd->add_option("--item-col", opts.item_col, "item column index");
  cmd->add_option("--rating-col", opts.rating_col, "rating column index");
  cmd->add_option("--timestamp-col", opts.timestamp_col,
                  "timestamp column index");
  cmd->add_flag("--no-timestamps", opts.no_timestamps,
                "input carries no timestamp column");
  cmd->add_option("--dedup", opts.dedup,
                  "duplicate (user,item) policy: last | mean")
      ->check(CLI::IsMember({"last", "mean"}));
}

json input_config(const InputOpts& opts) {
  return json{{"input", opts.path},
              {"delimiter", opts.delimiter},
              {"no_header", opts.no_header},
              {"user_col", opts.user_col},
              {"item_col", opts.item_col},
              {"rating_col", opts.rating_col},
              {"timestamp_col", opts.no_timestamps ? -1 : opts.timestamp_col},
              {"dedup", opts.dedup}};
}

scx::SparseMatrix load_input(const InputOpts& opts) {
  std::ifstream in(opts.path, std::ios::binary);
  if (!in) throw scx::DataError("cannot open input file: " + opts.path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::string(magic, 4) == "SCM1") {
    in.seekg(0);
    return scx::read_matrix_cache(in);
  }
  in.clear();
  in.seekg(0);
  if (opts.delimiter.size() != 1)
    throw scx::ArgumentError("delimiter must be a single character");
  scx::ColumnMapping map;
  map.delimiter = opts.delimiter[0];
  map.has_header = !opts.no_header;
  map.user_col = opts.user_col;
  map.item_col = opts.item_col;
  map.rating_col = opts.rating_col;
  map.timestamp_col = opts.no_timestamps ? -1 : opts.timestamp_col;
  auto records = scx::load_interactions(in, map);
  auto policy = opts.dedup == "mean" ? scx::DedupPolicy::mean
                                     : scx::DedupPolicy::keep_last_by_timestamp;
  return scx::build_matrix(records, policy);
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw scx::ArgumentError(std::string("bad ") + what + " value: " + tok);
    }
  }
  if (out.empty())
    throw scx::ArgumentError(std::string("empty ") + what + " list");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scx::DataError("cannot open output file: " + path);
  out << text;
}

int cmd_analyze(const InputOpts& in_opts, const std::string& p_list,
                const std::string& alpha_list, std::size_t k,
                std::uint64_t seed, bool time_weighted, double epsilon,
                std::size_t oversampling, std::size_t power_iterations,
                const std::string& output) {
  auto ps = parse_double_list(p_list, "p");
  auto alphas = parse_double_list(alpha_list, "alpha");
  scx::SparseMatrix m = load_input(in_opts);
  scx::SvdQuality quality{oversampling, power_iterations, seed};
  json reports = json::array();
  for (double p : ps) {
    for (double alpha : alphas) {
      scx::PerturbationParams params{p, alpha, time_weighted, epsilon, seed};
      auto t0 = std::chrono::steady_clock::now();
      scx::ComplexityReport rep = scx::complexity_report(m, params, k, quality);
      auto t1 = std::chrono::steady_clock::now();
      std::cerr << "analyze p=" << p << " alpha=" << alpha << " took "
                << std::chrono::duration<double>(t1 - t0).count() << "s\n";
      json j = scx::to_json(rep);
      j["schema"] = 1;
      j["config"] = json{{"command", "analyze"},
                         {"p", p},
                         {"alpha", alpha},
                         {"k", k},
                         {"seed", seed},
                         {"time_weighted", time_weighted},
                         {"epsilon", epsilon},
                         {"oversampling", oversampling},
                         {"power_iterations", power_iterations},
                         {"input", input_config(in_opts)}};
      reports.push_back(std::move(j));
    }
  }
  std::string text = (reports.size() == 1 ? reports[0] : reports).dump(2);
  text.push_back('\n');
  write_text(output, text);
  return 0;
}

int cmd_score(const InputOpts& in_opts, std::size_t folds, double alpha,
              std::size_t k, std::uint64_t seed, bool time_weighted,
              double epsilon, std::size_t oversampling,
              std::size_t power_iterations, const std::string& output) {
  scx::SparseMatrix m = load_input(in_opts);
  scx::PerturbationParams params{0.1, alpha, time_weighted, epsilon, seed};
  scx::SvdQuality quality{oversampling, power_iterations, seed};
  scx::ScoreTable table = scx::score_ratings(m, folds, params, k, quality);
  json config{{"command", "score"},
              {"folds", folds},
              {"alpha", alpha},
              {"k", k},
              {"seed", seed},
              {"time_weighted", time_weighted},
              {"epsilon", epsilon},
              {"oversampling", oversampling},
              {"power_iterations", power_iterations},
              {"input", input_config(in_opts)}};
  std::ostringstream out;
  out << "# " << config.dump() << "\n";
  scx::write_scores_csv(out, m, table);
  write_text(output, out.str());
  return 0;
}

int cmd_select(const std::string& scores_path, const std::string& strategy,
               double rate, std::uint64_t seed, bool no_stratify,
               bool exclude_last, const std::string& output) {
  std::ifstream in(scores_path, std::ios::binary);
  if (!in) throw scx::DataError("cannot open scores file: " + scores_path);
  scx::LoadedScores loaded = scx::read_scores_csv(in);
  scx::SparseMatrix train = loaded.matrix;
  if (exclude_last)
    train = scx::holdout_last_interaction(loaded.matrix).train;
  scx::SelectionSpec spec{scx::parse_strategy(strategy), rate, seed,
                          !no_stratify};
  scx::EntrySet subset = scx::select_subset(train, loaded.table, spec);
  scx::SparseMatrix selected = scx::subset_matrix(train, subset);
  json config{{"command", "select"},  {"scores", scores_path},
              {"strategy", strategy}, {"rate", rate},
              {"seed", seed},         {"stratified", !no_stratify},
              {"exclude_last", exclude_last}};
  std::ostringstream out;
  out << "# " << config.dump() << "\n";
  scx::write_interactions_csv(out, selected, loaded.matrix.has_timestamps());
  write_text(output, out.str());
  return 0;
}

int cmd_subsample(const InputOpts& in_opts, std::size_t n_target,
                  std::size_t min_user, std::size_t min_item,
                  std::uint64_t seed, std::size_t n_samples,
                  const std::string& prefix) {
  scx::SparseMatrix m = load_input(in_opts);
  json summary = json::array();
  for (std::size_t i = 0; i < n_samples; ++i) {
    scx::SubsampleParams params{n_target, min_user, min_item, seed + i, 1};
    scx::SubsampleResult res = scx::subsample_dataset(m, params);
    json config{{"command", "subsample"},
                {"n_target", n_target},
                {"min_user_interactions", min_user},
                {"min_item_interactions", min_item},
                {"seed", seed + i},
                {"sample", i},
                {"input", input_config(in_opts)}};
    std::string csv_path = prefix + "_" + std::to_string(i) + ".csv";
    std::string json_path = prefix + "_" + std::to_string(i) + ".json";
    std::ostringstream csv;
    csv << "# " << config.dump() << "\n";
    scx::write_interactions_csv(csv, res.matrix, m.has_timestamps());
    write_text(csv_path, csv.str());
    json prov = scx::to_json(res.provenance);
    prov["config"] = config;
    prov["schema"] = 1;
    write_text(json_path, prov.dump(2) + "\n");
    summary.push_back(json{{"csv", csv_path},
                           {"provenance", json_path},
                           {"entries", res.provenance.output_entries}});
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_correlate(const std::string& path, std::string x_col,
                  std::string y_col, const std::string& output) {
  if (x_col.empty() != y_col.empty())
    throw scx::ArgumentError("--x and --y must be given together");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw scx::DataError("cannot open input file: " + path);
  std::string line;
  std::size_t line_no = 0;
  int xi = -1, yi = -1;
  std::vector<std::pair<double, double>> pairs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = scx::detail::split_line(line, ',');
    if (xi < 0) {
      // header row resolves column positions
      if (x_col.empty()) {
        if (fields.size() < 2)
          throw scx::DataError("correlate: header has fewer than 2 columns");
        xi = 0;
        yi = 1;
      } else {
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == x_col) xi = static_cast<int>(i);
          if (fields[i] == y_col) yi = static_cast<int>(i);
        }
        if (xi < 0 || yi < 0)
          throw scx::DataError("columns not found in header: " + x_col + ", " +
                               y_col);
      }
      if (!x_col.empty() && x_col == y_col)
        throw scx::ArgumentError("--x and --y must name different columns");
      continue;
    }
    if (static_cast<int>(fields.size()) <= std::max(xi, yi))
      throw scx::ParseError("row has too few columns", line_no);
    double x = scx::detail::parse_double(fields[static_cast<std::size_t>(xi)],
                                         line_no, "x value");
    double y = scx::detail::parse_double(fields[static_cast<std::size_t>(yi)],
                                         line_no, "y value");
    pairs.emplace_back(x, y);
  }
  if (pairs.empty()) throw scx::DataError("correlate: no data rows");
  scx::Correlation c = scx::correlate(pairs);
  json j{{"pearson_r", c.pearson_r},
         {"n", c.n},
         {"schema", 1},
         {"version", scx::kVersion},
         {"config", json{{"command", "correlate"},
                         {"input", path},
                         {"x", x_col.empty() ? "<col 0>" : x_col},
                         {"y", y_col.empty() ? "<col 1>" : y_col}}}};
  write_text(output, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural complexity analysis for interaction datasets"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "complexity report for a dataset (RMSE_SC, d_SC)");
  InputOpts a_in;
  add_input_opts(analyze, a_in);
  std::string a_p = "0.1", a_alpha = "0.7", a_out = "-";
  std::size_t a_k = 50, a_os = 10, a_pi = 4;
  std::uint64_t a_seed = 0;
  bool a_tw = false;
  double a_eps = 1e-9;
  analyze->add_option("--p", a_p, "perturbation fraction(s), comma separated");
  analyze->add_option("--alpha", a_alpha,
                      "value perturbation ratio(s), comma separated");
  analyze->add_option("--k", a_k, "truncation rank (default 50)");
  analyze->add_option("--seed", a_seed, "random seed");
  analyze->add_flag("--time-weighted", a_tw, "time-weighted entry sampling");
  analyze->add_option("--epsilon", a_eps, "time-weighting epsilon");
  analyze->add_option("--oversampling", a_os, "SVD oversampling");
  analyze->add_option("--power-iterations", a_pi, "SVD power iterations");
  analyze->add_option("--output", a_out, "output path (default stdout)");

  // score
  auto* score = app.add_subcommand(
      "score", "per-interaction perturbation errors via disjoint folds");
  InputOpts s_in;
  add_input_opts(score, s_in);
  std::string s_out = "-";
  std::size_t s_folds = 10, s_k = 50, s_os = 10, s_pi = 4;
  std::uint64_t s_seed = 0;
  bool s_tw = false;
  double s_alpha = 0.7, s_eps = 1e-9;
  score->add_option("--folds", s_folds, "number of folds (default 10)");
  score->add_option("--alpha", s_alpha, "value perturbation ratio");
  score->add_option("--k", s_k, "truncation rank (default 50)");
  score->add_option("--seed", s_seed, "random seed");
  score->add_flag("--time-weighted", s_tw, "time-weighted split inside folds");
  score->add_option("--epsilon", s_eps, "time-weighting epsilon");
  score->add_option("--oversampling", s_os, "SVD oversampling");
  score->add_option("--power-iterations", s_pi, "SVD power iterations");
  score->add_option("--output", s_out, "output path (default stdout)");

  // select
  auto* select = app.add_subcommand(
      "select", "structure-aware training subset from a score table");
  std::string sel_scores, sel_strategy, sel_out = "-";
  double sel_rate = 0.1;
  std::uint64_t sel_seed = 0;
  bool sel_nostrat = false, sel_excl = false;
  select->add_option("--scores", sel_scores, "score CSV from `score`")
      ->required();
  select
      ->add_option("--strategy", sel_strategy,
                   "sc_low | sc_high | random | temporal")
      ->required();
  select->add_option("--rate", sel_rate, "sampling rate in (0,1]");
  select->add_option("--seed", sel_seed, "random seed");
  select->add_flag("--no-stratify", sel_nostrat,
                   "disable per-user stratification");
  select->add_flag("--exclude-last", sel_excl,
                   "drop each user's final interaction before selecting");
  select->add_option("--output", sel_out, "output path (default stdout)");

  // subsample
  auto* subsample = app.add_subcommand(
      "subsample", "target-budget dataset subsampling with provenance");
  InputOpts sub_in;
  add_input_opts(subsample, sub_in);
  std::size_t sub_target = 100000, sub_min_user = 5, sub_min_item = 2,
              sub_n = 3;
  std::uint64_t sub_seed = 0;
  std::string sub_prefix = "subsample";
  subsample->add_option("--n-target", sub_target, "interaction budget");
  subsample->add_option("--min-user", sub_min_user,
                        "minimum interactions per user");
  subsample->add_option("--min-item", sub_min_item,
                        "minimum interactions per item");
  subsample->add_option("--seed", sub_seed,
                        "base seed; sample i uses seed+i");
  subsample->add_option("--n-samples", sub_n, "number of samples");
  subsample->add_option("--output-prefix", sub_prefix,
                        "output file prefix (default subsample)");

  // correlate
  auto* correlate = app.add_subcommand(
      "correlate", "Pearson correlation between two CSV columns");
  std::string c_in, c_x, c_y, c_out = "-";
  correlate->add_option("--input", c_in, "CSV with header row")->required();
  correlate->add_option("--x", c_x, "x column name (default: first column)");
  correlate->add_option("--y", c_y, "y column name (default: second column)");
  correlate->add_option("--output", c_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze)
      return cmd_analyze(a_in, a_p, a_alpha, a_k, a_seed, a_tw, a_eps, a_os,
                         a_pi, a_out);
    if (*score)
      return cmd_score(s_in, s_folds, s_alpha, s_k, s_seed, s_tw, s_eps, s_os,
                       s_pi, s_out);
    if (*select)
      return cmd_select(sel_scores, sel_strategy, sel_rate, sel_seed,
                        sel_nostrat, sel_excl, sel_out);
    if (*subsample)
      return cmd_subsample(sub_in, sub_target, sub_min_user, sub_min_item,
                           sub_seed, sub_n, sub_prefix);
    if (*correlate) return cmd_correlate(c_in, c_x, c_y, c_out);
  } catch (const scx::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const scx::RatioUndefinedError& e) {
    std::cerr << "error: " << e.what() << " (raw rmse " << e.raw_rmse()
              << ")\n";
    return 4;
  } catch (const scx::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const scx::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
