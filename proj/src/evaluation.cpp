#include "dtwlvq/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dtwlvq/classifiers.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/format.hpp"
#include "dtwlvq/rng.hpp"

namespace dtwlvq {

namespace {

void check_fold_id(int fold, int folds) {
  if (fold < 1 || fold > folds)
    throw input_error("fold id " + std::to_string(fold) + " outside 1.." +
                      std::to_string(folds));
}

} // namespace

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
  check_fold_id(fold, folds);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
  check_fold_id(fold, folds);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

FoldPlan make_folds(const LabeledDataset& D, int folds, std::uint64_t seed) {
  if (folds < 2) throw config_error("fold count must be at least 2");
  if (static_cast<std::size_t>(folds) > D.size())
    throw config_error("fold count exceeds dataset size");

  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.fold_of.assign(D.size(), 0);

  Rng rng(mix_seed(seed, {0x0f}));
  std::size_t offset = 0;
  for (int label = 1; label <= D.num_classes(); ++label) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < D.size(); ++i)
      if (D[i].label == label) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t t = 0; t < members.size(); ++t)
      plan.fold_of[members[t]] = static_cast<int>((offset + t) % folds) + 1;
    offset = (offset + members.size()) % folds;

    if (members.size() < static_cast<std::size_t>(folds))
      plan.warnings.push_back("class " + std::to_string(label) + " has only " +
                              std::to_string(members.size()) + " examples for " +
                              std::to_string(folds) + " folds");
    std::vector<bool> hit(folds, false);
    for (std::size_t i : members) hit[plan.fold_of[i] - 1] = true;
    if (std::count(hit.begin(), hit.end(), true) < 2)
      throw config_error("class " + std::to_string(label) +
                         " would be confined to a single fold");
  }
  return plan;
}

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::OneNN: return "1-nn";
    case ClassifierKind::KMeans: return "kmeans";
    case ClassifierKind::Slvq: return "slvq";
    case ClassifierKind::Alvq: return "alvq";
    case ClassifierKind::Glvq: return "glvq";
  }
  throw input_error("unknown classifier kind");
}

ClassifierKind classifier_from_name(const std::string& name) {
  if (name == "1-nn") return ClassifierKind::OneNN;
  if (name == "kmeans") return ClassifierKind::KMeans;
  if (name == "slvq") return ClassifierKind::Slvq;
  if (name == "alvq") return ClassifierKind::Alvq;
  if (name == "glvq") return ClassifierKind::Glvq;
  throw input_error("unknown classifier name '" + name + "'");
}

namespace {

double accuracy_on(const Codebook& cb, const LabeledDataset& D,
                   const std::vector<std::size_t>& indices) {
  std::size_t correct = 0;
  for (std::size_t i : indices)
    if (classify(cb, D[i].series) == D[i].label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

const std::vector<double>& grid_values(ClassifierKind kind, const HyperGrid& grid) {
  const auto& values = kind == ClassifierKind::Glvq ? grid.sigma : grid.eta;
  if (values.empty()) throw config_error("hyper-parameter grid is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw config_error("hyper-parameter grid values must be positive");
  return values;
}

} // namespace

SelectAndTestResult select_and_test(const LabeledDataset& D, const FoldPlan& plan, int fold,
                                    ClassifierKind kind, const HyperGrid& grid,
                                    const ProtocolSettings& settings) {
  if (plan.fold_of.size() != D.size())
    throw input_error("fold plan does not match the dataset");
  const auto tr = plan.train_indices(fold);
  const auto te = plan.test_indices(fold);
  const auto train_set = D.subset(tr);

  SelectAndTestResult result{};
  result.selected_value = std::numeric_limits<double>::quiet_NaN();
  result.train_size = tr.size();
  result.test_size = te.size();

  if (kind == ClassifierKind::OneNN) {
    std::vector<LabeledPrototype> protos;
    for (const auto& ex : train_set.examples()) protos.push_back({ex.series, ex.label});
    const Codebook cb(std::move(protos));
    result.fold_accuracy = accuracy_on(cb, D, te);
    result.training_error = 1.0 - accuracy(cb, train_set);
    return result;
  }

  const Codebook init = kmeans_per_class(train_set, settings.k, settings.kmeans_max_iter,
                                         settings.kmeans_seed, settings.dba_max_iter);
  if (kind == ClassifierKind::KMeans) {
    result.fold_accuracy = accuracy_on(init, D, te);
    result.training_error = 1.0 - accuracy(init, train_set);
    return result;
  }

  const auto& values = grid_values(kind, grid);
  const Method method = kind == ClassifierKind::Slvq ? Method::SymmetricLvq1
                        : kind == ClassifierKind::Alvq ? Method::AsymmetricLvq1
                                                       : Method::AsymmetricGlvq;
  bool have = false;
  Codebook best = init;
  for (double v : values) {
    TrainConfig cfg;
    cfg.method = method;
    cfg.eta0 = method == Method::AsymmetricGlvq ? 1.0 : v;
    cfg.sigma0 = method == Method::AsymmetricGlvq ? v : 1.0;
    cfg.max_epochs = settings.max_epochs;
    cfg.seed = settings.train_seed;
    auto trained = train(train_set, init, cfg);
    const double err = 1.0 - accuracy(trained.codebook, train_set);
    if (!have || err < result.training_error ||
        (err == result.training_error && v < result.selected_value)) {
      have = true;
      result.training_error = err;
      result.selected_value = v;
      result.report = std::move(trained.report);
      best = std::move(trained.codebook);
    }
  }
  result.fold_accuracy = accuracy_on(best, D, te);
  return result;
}

void validate(const ResultsTable& table) {
  if (table.datasets.empty()) throw input_error("results table has no datasets");
  if (table.classifiers.empty()) throw input_error("results table has no classifiers");
  if (table.accuracy.size() != table.datasets.size())
    throw input_error("results table row count does not match dataset names");
  for (std::size_t d = 0; d < table.accuracy.size(); ++d) {
    if (table.accuracy[d].size() != table.classifiers.size())
      throw input_error("results table row '" + table.datasets[d] + "' has wrong width");
    for (double v : table.accuracy[d])
      if (!(v >= 0.0 && v <= 100.0))
        throw input_error("accuracy outside [0,100] in row '" + table.datasets[d] + "'");
  }
}

RankTable rank_table(const ResultsTable& table) {
  validate(table);
  const std::size_t n = table.datasets.size();
  const std::size_t m = table.classifiers.size();

  RankTable out;
  out.ranks.assign(n, std::vector<int>(m, 0));
  for (std::size_t d = 0; d < n; ++d) {
    const auto& row = table.accuracy[d];
    for (std::size_t c = 0; c < m; ++c) {
      int better = 0;
      for (double a : row)
        if (a > row[c]) ++better;
      out.ranks[d][c] = 1 + better;
    }
  }

  out.rank_counts.assign(m, std::vector<int>(m, 0));
  out.average_rank.assign(m, 0.0);
  out.std_rank_population.assign(m, 0.0);
  out.std_rank_sample.assign(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    double mean = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      ++out.rank_counts[c][out.ranks[d][c] - 1];
      mean += out.ranks[d][c];
    }
    mean /= static_cast<double>(n);
    out.average_rank[c] = mean;
    double sq = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const double dev = out.ranks[d][c] - mean;
      sq += dev * dev;
    }
    out.std_rank_population[c] = std::sqrt(sq / static_cast<double>(n));
    out.std_rank_sample[c] = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> winning_percentage(const ResultsTable& table) {
  validate(table);
  const std::size_t n = table.datasets.size();
  const std::size_t m = table.classifiers.size();
  std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      int wins = 0;
      for (const auto& row : table.accuracy)
        if (row[j] < row[i]) ++wins;
      w[i][j] = 100.0 * wins / static_cast<double>(n);
    }
  return w;
}

std::vector<std::vector<double>> mean_percentage_difference(const ResultsTable& table) {
  validate(table);
  const std::size_t n = table.datasets.size();
  const std::size_t m = table.classifiers.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      double sum = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double ai = table.accuracy[d][i], aj = table.accuracy[d][j];
        if (ai + aj == 0.0)
          throw computation_error("dataset '" + table.datasets[d] +
                                  "' has zero accuracy sum for classifiers '" +
                                  table.classifiers[i] + "' and '" + table.classifiers[j] +
                                  "'");
        sum += (ai - aj) / (ai + aj);
      }
      a[i][j] = sum * (200.0 / static_cast<double>(n));
    }
  return a;
}

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false, quoted_field = false;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    quoted_field = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (i < n) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"' && field.empty() && !quoted_field) {
      in_quotes = true;
      quoted_field = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n') {
      end_row();
      ++i;
    } else if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (quoted_field) {
      throw parse_error("unexpected character after closing quote");
    } else {
      field += c;
      ++i;
    }
  }
  if (in_quotes) throw parse_error("unterminated quoted field");
  if (!field.empty() || !row.empty() || quoted_field) end_row();
  return rows;
}

double parse_accuracy(const std::string& field, std::size_t row_number) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    throw parse_error("row " + std::to_string(row_number) + ": '" + field +
                      "' is not a number");
  return v;
}

} // namespace

ResultsTable read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rows = parse_csv(buf.str());

  if (rows.empty()) throw parse_error("empty results csv");
  const auto& header = rows[0];
  if (header[0] != "dataset")
    throw parse_error("results csv must start with a 'dataset' column");
  if (header.size() < 2) throw parse_error("results csv has no classifier columns");

  ResultsTable table;
  table.classifiers.assign(header.begin() + 1, header.end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw parse_error("row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " fields, expected " +
                        std::to_string(header.size()));
    table.datasets.push_back(rows[r][0]);
    std::vector<double> acc;
    for (std::size_t c = 1; c < rows[r].size(); ++c)
      acc.push_back(parse_accuracy(rows[r][c], r + 1));
    table.accuracy.push_back(std::move(acc));
  }
  validate(table);
  return table;
}

void write_results_csv(const ResultsTable& table, const std::string& path) {
  validate(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  out << "dataset";
  for (const auto& name : table.classifiers) out << ',' << csv_quote(name);
  out << '\n';
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    out << csv_quote(table.datasets[d]);
    for (double v : table.accuracy[d]) out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace dtwlvq
