#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtwlvq/averaging.hpp"
#include "dtwlvq/dtw.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/experiment.hpp"
#include "dtwlvq/format.hpp"

namespace {

using namespace dtwlvq;

// Unlabeled series file: one univariate series per row, comma or tab
// delimited (auto-detected from the first non-empty row).
std::vector<TimeSeries> read_series_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  std::vector<std::string> lines;
  std::string line;
  std::stringstream text(buf.str());
  while (std::getline(text, line)) lines.push_back(line);

  char delim = ',';
  for (const auto& l : lines)
    if (!l.empty() && l.find_first_not_of(" \t\r") != std::string::npos) {
      if (l.find('\t') != std::string::npos) delim = '\t';
      break;
    }

  std::vector<TimeSeries> series;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string trimmed = lines[n];
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed.empty()) continue;

    std::vector<double> values;
    std::stringstream row(trimmed);
    std::string field;
    while (std::getline(row, field, delim)) {
      const std::size_t a = field.find_first_not_of(" \t");
      const std::size_t b = field.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw parse_error("line " + std::to_string(n + 1) + ": empty field");
      double v = 0.0;
      auto [p, ec] = std::from_chars(field.data() + a, field.data() + b + 1, v);
      if (ec != std::errc{} || p != field.data() + b + 1)
        throw parse_error("line " + std::to_string(n + 1) + ": '" + field +
                          "' is not a number");
      values.push_back(v);
    }
    series.emplace_back(std::move(values));
  }
  if (series.empty()) throw parse_error("'" + path + "' has no series");
  return series;
}

void write_series_row(std::ostream& out, const TimeSeries& s) {
  for (std::size_t i = 0; i < s.length(); ++i) {
    if (i) out << ',';
    out << format_double(s.value(i));
  }
  out << '\n';
}

int cmd_run(const std::string& config_path, const ExperimentConfig& overrides,
            bool has_seed, bool has_folds, bool has_epochs, bool has_workers, bool has_k,
            bool has_output) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (has_seed) config.seed = overrides.seed;
  if (has_folds) config.folds = overrides.folds;
  if (has_epochs) config.max_epochs = overrides.max_epochs;
  if (has_workers) config.workers = overrides.workers;
  if (has_k) config.k_values = overrides.k_values;
  if (has_output) config.output_dir = overrides.output_dir;

  const auto outcome = run_experiment(config);

  std::cout << "dataset";
  for (const auto& name : outcome.table.classifiers) std::cout << ',' << name;
  std::cout << '\n';
  for (std::size_t d = 0; d < outcome.table.datasets.size(); ++d) {
    std::cout << outcome.table.datasets[d];
    for (double v : outcome.table.accuracy[d]) std::cout << ',' << format_double(v);
    std::cout << '\n';
  }
  std::cout << "artifacts: " << config.output_dir << '\n';

  if (!outcome.failures.empty()) {
    for (const auto& f : outcome.failures) std::cerr << "failed: " << f << '\n';
    return 1;
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& csvs, const std::string& out_dir) {
  const auto report = compare(csvs);
  std::cout << "classifier,avg_rank,std_rank\n";
  for (std::size_t c = 0; c < report.table.classifiers.size(); ++c)
    std::cout << report.table.classifiers[c] << ','
              << format_double(report.ranks.average_rank[c]) << ','
              << format_double(report.ranks.std_rank_sample[c]) << '\n';
  if (!out_dir.empty()) {
    write_compare_report(report, out_dir);
    std::cout << "artifacts: " << out_dir << '\n';
  }
  return 0;
}

int cmd_dist(const std::string& path_a, const std::string& path_b) {
  const auto A = read_series_file(path_a);
  const auto B = read_series_file(path_b);
  for (const auto& a : A) {
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (j) std::cout << ',';
      std::cout << format_double(dtw_distance(a, B[j]));
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_avg(const std::string& method, const std::string& input, double alpha,
            std::size_t max_iter, const std::string& output) {
  const auto series = read_series_file(input);
  TimeSeries result({0.0});
  if (method == "dba") {
    result = dba_mean(series, series[medoid_index(series)], max_iter);
  } else {
    if (series.size() != 2)
      throw input_error("'" + method + "' averages exactly two series, got " +
                        std::to_string(series.size()));
    const auto path = dtw(series[0], series[1]).path;
    result = method == "asym"
                 ? asymmetric_weighted_average(series[0], series[1], alpha, path)
                 : symmetric_weighted_average(series[0], series[1], alpha, path);
  }
  if (output.empty()) {
    write_series_row(std::cout, result);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw parse_error("cannot open '" + output + "' for writing");
    write_series_row(out, result);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest-prototype time series classification in DTW spaces"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a cross-validation experiment");
  std::string config_path;
  ExperimentConfig overrides;
  int override_k = 1;
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", overrides.seed, "Override the experiment seed");
  run->add_option("--folds", overrides.folds, "Override the fold count");
  run->add_option("--max-epochs", overrides.max_epochs, "Override the epoch cap");
  run->add_option("--workers", overrides.workers, "Override the worker count");
  run->add_option("--k", override_k, "Override prototypes per class")
      ->check(CLI::PositiveNumber);
  run->add_option("--output", overrides.output_dir, "Override the output directory");

  auto* cmp = app.add_subcommand("compare", "Comparison statistics over accuracy CSVs");
  std::vector<std::string> csvs;
  std::string cmp_out;
  cmp->add_option("csv", csvs, "Accuracy tables to merge")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--out", cmp_out, "Directory for rank/W/A artifacts");

  auto* dist = app.add_subcommand("dist", "Pairwise DTW distances between series files");
  std::string dist_a, dist_b;
  dist->add_option("fileA", dist_a, "Series file")->required()->check(CLI::ExistingFile);
  dist->add_option("fileB", dist_b, "Series file")->required()->check(CLI::ExistingFile);

  auto* avg = app.add_subcommand("avg", "Average the series of a file");
  std::string avg_method, avg_input, avg_output;
  double avg_alpha = 0.5;
  std::size_t avg_max_iter = 50;
  avg->add_option("--method", avg_method, "dba, asym or sym")
      ->required()
      ->check(CLI::IsMember({"dba", "asym", "sym"}));
  avg->add_option("--input", avg_input, "Series file")
      ->required()
      ->check(CLI::ExistingFile);
  avg->add_option("--alpha", avg_alpha, "Mixing weight for asym/sym");
  avg->add_option("--max-iter", avg_max_iter, "Iteration cap for dba");
  avg->add_option("--output", avg_output, "Write the result here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (run->count("--k")) overrides.k_values = {std::size_t(override_k)};
      return cmd_run(config_path, overrides, run->count("--seed") > 0,
                     run->count("--folds") > 0, run->count("--max-epochs") > 0,
                     run->count("--workers") > 0, run->count("--k") > 0,
                     run->count("--output") > 0);
    }
    if (cmp->parsed()) return cmd_compare(csvs, cmp_out);
    if (dist->parsed()) return cmd_dist(dist_a, dist_b);
    if (avg->parsed()) return cmd_avg(avg_method, avg_input, avg_alpha, avg_max_iter, avg_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
