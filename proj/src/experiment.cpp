#include "dtwlvq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dtwlvq/dataset_io.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/format.hpp"
#include "dtwlvq/rng.hpp"

namespace dtwlvq {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path.string() + "' for writing");
  out << text;
}

template <typename T>
std::vector<T> number_list(const ordered_json& j, const std::string& key) {
  std::vector<T> out;
  if (j.is_array())
    for (const auto& v : j) {
      if (!v.is_number()) throw config_error("'" + key + "' must hold numbers");
      out.push_back(v.get<T>());
    }
  else if (j.is_number())
    out.push_back(j.get<T>());
  else
    throw config_error("'" + key + "' must be a number or an array of numbers");
  return out;
}

void validate_config(const ExperimentConfig& config) {
  if (config.datasets.empty()) throw config_error("no datasets configured");
  if (config.methods.empty()) throw config_error("no methods configured");
  std::set<ClassifierKind> seen;
  for (auto m : config.methods)
    if (!seen.insert(m).second)
      throw config_error("duplicate method '" + classifier_name(m) + "'");
  if (config.folds < 2) throw config_error("folds must be at least 2");
  if (config.k_values.empty()) throw config_error("k list is empty");
  std::set<std::size_t> ks;
  for (std::size_t k : config.k_values) {
    if (k < 1) throw config_error("k must be at least 1");
    if (!ks.insert(k).second) throw config_error("duplicate k value");
  }
  if (config.max_epochs < 1) throw config_error("max_epochs must be at least 1");
  if (config.kmeans_max_iter < 1) throw config_error("kmeans_max_iter must be at least 1");
  if (config.dba_max_iter < 1) throw config_error("dba_max_iter must be at least 1");
  if (config.output_dir.empty()) throw config_error("output_dir is empty");
  if (config.workers < 0) throw config_error("workers must not be negative");
}

int resolve_workers(const ExperimentConfig& config) {
  if (config.workers > 0) return config.workers;
  if (const char* env = std::getenv("DTWLVQ_WORKERS")) {
    int v = 0;
    auto [p, ec] = std::from_chars(env, env + std::string(env).size(), v);
    if (ec == std::errc{} && *p == '\0' && v > 0) return v;
  }
  return 1;
}

struct Column {
  std::string name;
  ClassifierKind kind;
  std::size_t k;
};

std::vector<Column> make_columns(const ExperimentConfig& config) {
  std::vector<Column> columns;
  for (auto kind : config.methods) {
    if (kind == ClassifierKind::OneNN) {
      columns.push_back({classifier_name(kind), kind, 1});
      continue;
    }
    for (std::size_t k : config.k_values) {
      std::string name = classifier_name(kind);
      if (k != 1) name += "[k=" + std::to_string(k) + "]";
      columns.push_back({name, kind, k});
    }
  }
  return columns;
}

struct LoadedDataset {
  std::string name;
  std::string path;
  LabeledDataset data;
  std::uint64_t fold_seed;
  std::optional<FoldPlan> plan;
  std::string plan_error;
};

struct Cell {
  std::size_t dataset, column;
  int fold;
  std::uint64_t kmeans_seed, train_seed;
};

struct CellOutcome {
  bool ok = false;
  SelectAndTestResult result;
  std::string error;
};

ordered_json config_json(const ExperimentConfig& config,
                         const std::vector<Column>& columns) {
  ordered_json j;
  j["datasets"] = config.datasets;
  auto& methods = j["methods"] = ordered_json::array();
  for (auto m : config.methods) methods.push_back(classifier_name(m));
  auto& cols = j["columns"] = ordered_json::array();
  for (const auto& c : columns) cols.push_back(c.name);
  j["folds"] = config.folds;
  j["seed"] = config.seed;
  j["grid"]["sigma"] = config.grid.sigma;
  j["grid"]["eta"] = config.grid.eta;
  j["k"] = config.k_values;
  j["max_epochs"] = config.max_epochs;
  j["kmeans_max_iter"] = config.kmeans_max_iter;
  j["dba_max_iter"] = config.dba_max_iter;
  j["output_dir"] = config.output_dir;
  j["znormalize"] = config.znormalize;
  j["strict_lengths"] = config.strict_lengths;
  return j;
}

ordered_json cell_json(const LoadedDataset& ds, const Column& column, const Cell& cell,
                       const SelectAndTestResult& r) {
  ordered_json j;
  j["version"] = 1;
  j["dataset"] = ds.name;
  j["method"] = column.name;
  j["classifier"] = classifier_name(column.kind);
  j["k"] = column.k;
  j["fold"] = cell.fold;
  j["seeds"]["fold_seed"] = ds.fold_seed;
  j["seeds"]["kmeans_seed"] = cell.kmeans_seed;
  j["seeds"]["train_seed"] = cell.train_seed;
  j["train_size"] = r.train_size;
  j["test_size"] = r.test_size;
  j["fold_accuracy"] = r.fold_accuracy;
  j["training_error"] = r.training_error;
  if (std::isnan(r.selected_value))
    j["selected_value"] = nullptr;
  else
    j["selected_value"] = r.selected_value;
  j["epochs_run"] = r.report.epochs_run;
  j["skipped_inputs"] = r.report.skipped_inputs;
  j["error_curve"] = r.report.error_rate;
  j["cost_curve"] = r.report.cost;
  return j;
}

} // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("'" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw config_error("experiment config must be a JSON object");

  static const std::set<std::string> known = {
      "datasets", "methods",         "folds",        "seed",
      "grid",     "k",               "max_epochs",   "kmeans_max_iter",
      "dba_max_iter", "output_dir",  "workers",      "znormalize",
      "strict_lengths"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw config_error("unknown config key '" + key + "'");

  ExperimentConfig config;
  if (!doc.contains("datasets") || !doc["datasets"].is_array() || doc["datasets"].empty())
    throw config_error("config needs a non-empty 'datasets' array");
  config.datasets = doc["datasets"].get<std::vector<std::string>>();

  if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty())
    throw config_error("config needs a non-empty 'methods' array");
  config.methods.clear();
  for (const auto& name : doc["methods"]) {
    if (!name.is_string()) throw config_error("'methods' must hold classifier names");
    config.methods.push_back(classifier_from_name(name.get<std::string>()));
  }

  if (doc.contains("folds")) config.folds = doc["folds"].get<int>();
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("grid")) {
    const auto& grid = doc["grid"];
    if (!grid.is_object()) throw config_error("'grid' must be an object");
    for (const auto& [key, value] : grid.items())
      if (key != "sigma" && key != "eta")
        throw config_error("unknown grid key '" + key + "'");
    if (grid.contains("sigma")) config.grid.sigma = number_list<double>(grid["sigma"], "sigma");
    if (grid.contains("eta")) config.grid.eta = number_list<double>(grid["eta"], "eta");
  }
  if (doc.contains("k")) config.k_values = number_list<std::size_t>(doc["k"], "k");
  if (doc.contains("max_epochs")) config.max_epochs = doc["max_epochs"].get<std::size_t>();
  if (doc.contains("kmeans_max_iter"))
    config.kmeans_max_iter = doc["kmeans_max_iter"].get<std::size_t>();
  if (doc.contains("dba_max_iter"))
    config.dba_max_iter = doc["dba_max_iter"].get<std::size_t>();
  if (doc.contains("output_dir")) config.output_dir = doc["output_dir"].get<std::string>();
  if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
  if (doc.contains("znormalize")) config.znormalize = doc["znormalize"].get<bool>();
  if (doc.contains("strict_lengths"))
    config.strict_lengths = doc["strict_lengths"].get<bool>();

  validate_config(config);
  return config;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto columns = make_columns(config);
  const int workers = resolve_workers(config);

  LoadOptions load_options;
  load_options.strict_lengths = config.strict_lengths;
  load_options.znormalize = config.znormalize;

  std::vector<LoadedDataset> datasets;
  std::set<std::string> names;
  for (const auto& path : config.datasets) {
    LoadedDataset ds{fs::path(path).stem().string(), path,
                     load_dataset(path, load_options), 0, std::nullopt, ""};
    if (!names.insert(ds.name).second)
      throw config_error("duplicate dataset name '" + ds.name + "'");
    ds.fold_seed = mix_seed(config.seed, {0x0a, fnv1a64(ds.name)});
    try {
      ds.plan = make_folds(ds.data, config.folds, ds.fold_seed);
    } catch (const std::exception& e) {
      ds.plan_error = e.what();
    }
    datasets.push_back(std::move(ds));
  }

  std::vector<Cell> cells;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    if (!datasets[d].plan) continue;
    const std::uint64_t h = fnv1a64(datasets[d].name);
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (int f = 1; f <= config.folds; ++f)
        cells.push_back({d, c, f,
                         mix_seed(config.seed, {0x4b, h, std::uint64_t(f), columns[c].k}),
                         mix_seed(config.seed, {0x7a, h, std::uint64_t(f)})});
  }

  std::vector<CellOutcome> outcomes(cells.size());
  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    const LoadedDataset& ds = datasets[cell.dataset];
    const Column& column = columns[cell.column];
    ProtocolSettings settings;
    settings.k = column.k;
    settings.max_epochs = config.max_epochs;
    settings.kmeans_max_iter = config.kmeans_max_iter;
    settings.dba_max_iter = config.dba_max_iter;
    settings.kmeans_seed = cell.kmeans_seed;
    settings.train_seed = cell.train_seed;
    try {
      outcomes[i].result = select_and_test(ds.data, *ds.plan, cell.fold, column.kind,
                                           config.grid, settings);
      outcomes[i].ok = true;
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };

  if (workers <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t n_threads = std::min<std::size_t>(workers, cells.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(i);
      });
    for (auto& t : pool) t.join();
  }

  ExperimentOutcome outcome;
  outcome.table.classifiers.clear();
  for (const auto& c : columns) outcome.table.classifiers.push_back(c.name);

  std::vector<std::vector<std::optional<double>>> grid_values(
      datasets.size(), std::vector<std::optional<double>>(columns.size()));
  std::vector<std::vector<double>> fold_sums(datasets.size(),
                                             std::vector<double>(columns.size(), 0.0));
  std::vector<std::vector<int>> fold_done(datasets.size(),
                                          std::vector<int>(columns.size(), 0));
  std::vector<std::vector<bool>> cell_failed(datasets.size(),
                                             std::vector<bool>(columns.size(), false));

  const fs::path out_root = config.output_dir;
  fs::create_directories(out_root);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    const auto& ds = datasets[cell.dataset];
    const auto& column = columns[cell.column];
    if (outcomes[i].ok) {
      const fs::path dir = out_root / ds.name / column.name;
      fs::create_directories(dir);
      write_file(dir / ("fold" + std::to_string(cell.fold) + ".json"),
                 cell_json(ds, column, cell, outcomes[i].result).dump(2) + "\n");
      fold_sums[cell.dataset][cell.column] += outcomes[i].result.fold_accuracy;
      ++fold_done[cell.dataset][cell.column];
    } else {
      cell_failed[cell.dataset][cell.column] = true;
      outcome.failures.push_back(ds.name + "/" + column.name + "/fold" +
                                 std::to_string(cell.fold) + ": " + outcomes[i].error);
    }
  }
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    if (!datasets[d].plan) {
      outcome.failures.push_back(datasets[d].name + ": " + datasets[d].plan_error);
      continue;
    }
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!cell_failed[d][c] && fold_done[d][c] == config.folds)
        grid_values[d][c] = 100.0 * fold_sums[d][c] / double(config.folds);
  }

  std::string table_csv = "dataset";
  for (const auto& c : columns) table_csv += "," + csv_quote(c.name);
  table_csv += "\n";
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    table_csv += csv_quote(datasets[d].name);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      table_csv += ",";
      if (grid_values[d][c]) table_csv += format_double(*grid_values[d][c]);
    }
    table_csv += "\n";
  }
  write_file(out_root / "table.csv", table_csv);

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    bool complete = true;
    for (std::size_t c = 0; c < columns.size(); ++c) complete &= bool(grid_values[d][c]);
    if (!complete) continue;
    outcome.table.datasets.push_back(datasets[d].name);
    std::vector<double> row;
    for (std::size_t c = 0; c < columns.size(); ++c) row.push_back(*grid_values[d][c]);
    outcome.table.accuracy.push_back(std::move(row));
  }

  ordered_json report;
  report["version"] = 1;
  report["config"] = config_json(config, columns);
  auto& ds_list = report["datasets"] = ordered_json::array();
  for (const auto& ds : datasets) {
    ordered_json j;
    j["name"] = ds.name;
    j["path"] = ds.path;
    j["examples"] = ds.data.size();
    j["classes"] = ds.data.num_classes();
    j["dim"] = ds.data.dim();
    j["fold_seed"] = ds.fold_seed;
    j["fold_warnings"] = ds.plan ? ds.plan->warnings : std::vector<std::string>{};
    ds_list.push_back(std::move(j));
  }
  auto& accuracy = report["accuracy"] = ordered_json::object();
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    auto& row = accuracy[datasets[d].name] = ordered_json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (grid_values[d][c])
        row[columns[c].name] = *grid_values[d][c];
      else
        row[columns[c].name] = nullptr;
    }
  }
  report["failures"] = outcome.failures;
  write_file(out_root / "report.json", report.dump(2) + "\n");

  return outcome;
}

CompareReport compare(const std::vector<std::string>& csv_paths) {
  if (csv_paths.empty()) throw input_error("no csv files given");

  CompareReport report;
  std::set<std::string> classifier_names;
  std::vector<std::string> base_order;
  std::set<std::string> base_set;

  for (std::size_t t = 0; t < csv_paths.size(); ++t) {
    const auto table = read_results_csv(csv_paths[t]);
    std::set<std::string> rows;
    for (const auto& name : table.datasets)
      if (!rows.insert(name).second)
        throw merge_error("'" + csv_paths[t] + "' lists dataset '" + name + "' twice");

    if (t == 0) {
      base_order = table.datasets;
      base_set = rows;
      report.table.datasets = table.datasets;
      report.table.accuracy.assign(table.datasets.size(), {});
    } else if (rows != base_set) {
      std::string diff;
      for (const auto& name : base_set)
        if (!rows.count(name)) diff += " -" + name;
      for (const auto& name : rows)
        if (!base_set.count(name)) diff += " +" + name;
      throw merge_error("'" + csv_paths[t] + "' covers different datasets:" + diff);
    }

    std::map<std::string, std::size_t> row_of;
    for (std::size_t d = 0; d < table.datasets.size(); ++d) row_of[table.datasets[d]] = d;

    for (const auto& name : table.classifiers)
      if (!classifier_names.insert(name).second)
        throw merge_error("classifier '" + name + "' appears in more than one input");
    report.table.classifiers.insert(report.table.classifiers.end(),
                                    table.classifiers.begin(), table.classifiers.end());
    for (std::size_t d = 0; d < base_order.size(); ++d) {
      const auto& src = table.accuracy[row_of.at(base_order[d])];
      report.table.accuracy[d].insert(report.table.accuracy[d].end(), src.begin(),
                                      src.end());
    }
  }

  report.ranks = rank_table(report.table);
  report.winning = winning_percentage(report.table);
  report.mean_pct_diff = mean_percentage_difference(report.table);
  return report;
}

void write_compare_report(const CompareReport& report, const std::string& out_dir) {
  const fs::path root = out_dir;
  fs::create_directories(root);
  const auto& table = report.table;

  std::string ranks_csv = "dataset";
  for (const auto& name : table.classifiers) ranks_csv += "," + csv_quote(name);
  ranks_csv += "\n";
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    ranks_csv += csv_quote(table.datasets[d]);
    for (int r : report.ranks.ranks[d]) ranks_csv += "," + std::to_string(r);
    ranks_csv += "\n";
  }
  write_file(root / "ranks.csv", ranks_csv);

  auto matrix_csv = [&](const std::vector<std::vector<double>>& m) {
    std::string text = "classifier";
    for (const auto& name : table.classifiers) text += "," + csv_quote(name);
    text += "\n";
    for (std::size_t i = 0; i < table.classifiers.size(); ++i) {
      text += csv_quote(table.classifiers[i]);
      for (double v : m[i]) text += "," + format_double(v);
      text += "\n";
    }
    return text;
  };
  write_file(root / "winning.csv", matrix_csv(report.winning));
  write_file(root / "mean_pct_diff.csv", matrix_csv(report.mean_pct_diff));

  ordered_json j;
  j["version"] = 1;
  j["classifiers"] = table.classifiers;
  j["datasets"] = table.datasets;
  j["ranks"] = report.ranks.ranks;
  j["rank_counts"] = report.ranks.rank_counts;
  j["avg_rank"] = report.ranks.average_rank;
  j["std_rank_sample"] = report.ranks.std_rank_sample;
  j["std_rank_population"] = report.ranks.std_rank_population;
  j["winning"] = report.winning;
  j["mean_pct_diff"] = report.mean_pct_diff;
  write_file(root / "report.json", j.dump(2) + "\n");
}

} // namespace dtwlvq
