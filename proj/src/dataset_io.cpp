#include "dtwlvq/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dtwlvq/errors.hpp"

namespace dtwlvq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const auto text = trim(field);
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size() ||
      !std::isfinite(v))
    throw parse_error("line " + std::to_string(line) + ": '" + field +
                      "' is not a finite number");
  return v;
}

long integral_label(double v, const std::string& context) {
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e15)
    throw parse_error(context + ": label must be an integer, got " + format_double(v));
  return static_cast<long>(v);
}

void znormalize_series(std::vector<double>& values, std::size_t dim) {
  const std::size_t len = values.size() / dim;
  for (std::size_t f = 0; f < dim; ++f) {
    double mean = 0.0;
    for (std::size_t t = 0; t < len; ++t) mean += values[t * dim + f];
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      const double d = values[t * dim + f] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(len));
    for (std::size_t t = 0; t < len; ++t) {
      values[t * dim + f] -= mean;
      if (sd > 0.0) values[t * dim + f] /= sd;
    }
  }
}

struct RawExample {
  std::string label_key;
  std::vector<double> values;
  std::size_t dim;
};

LabeledDataset assemble(std::vector<RawExample> raw,
                        const std::vector<std::string>& ordered_labels,
                        const LoadOptions& options, const std::string& path) {
  if (ordered_labels.size() < 2)
    throw parse_error("'" + path + "' contains only one class");
  std::map<std::string, int> id_of;
  for (std::size_t i = 0; i < ordered_labels.size(); ++i)
    id_of[ordered_labels[i]] = static_cast<int>(i) + 1;

  std::vector<LabeledExample> examples;
  for (auto& r : raw) {
    if (options.znormalize) znormalize_series(r.values, r.dim);
    examples.push_back({TimeSeries(std::move(r.values), r.dim), id_of.at(r.label_key)});
  }
  return LabeledDataset(std::move(examples), ordered_labels);
}

std::vector<std::string> sort_label_keys(const std::map<std::string, double>& numeric,
                                         const std::vector<std::string>& order_seen) {
  std::vector<std::string> keys = order_seen;
  std::sort(keys.begin(), keys.end(), [&](const std::string& a, const std::string& b) {
    return numeric.at(a) < numeric.at(b);
  });
  return keys;
}

LabeledDataset load_delimited(const std::string& path, const LoadOptions& options) {
  const auto text = read_file(path);

  std::vector<std::string> lines;
  std::string line;
  std::stringstream in(text);
  while (std::getline(in, line)) lines.push_back(line);

  char delim = ',';
  for (const auto& l : lines)
    if (!trim(l).empty()) {
      if (l.find('\t') != std::string::npos) delim = '\t';
      break;
    }

  std::vector<RawExample> raw;
  std::map<std::string, double> label_values;
  std::vector<std::string> label_order;
  std::size_t expected_len = 0;

  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const std::size_t line_no = n + 1;
    std::vector<std::string> fields;
    std::stringstream row(lines[n]);
    std::string field;
    while (std::getline(row, field, delim)) fields.push_back(field);
    if (fields.size() < 2)
      throw parse_error("line " + std::to_string(line_no) + ": no values after the label");

    const double label_value = parse_number(fields[0], line_no);
    const long label =
        integral_label(label_value, "line " + std::to_string(line_no));
    const std::string key = format_double(static_cast<double>(label));

    RawExample r;
    r.label_key = key;
    r.dim = 1;
    for (std::size_t i = 1; i < fields.size(); ++i)
      r.values.push_back(parse_number(fields[i], line_no));

    if (expected_len == 0) expected_len = r.values.size();
    if (options.strict_lengths && r.values.size() != expected_len)
      throw parse_error("line " + std::to_string(line_no) + ": " +
                        std::to_string(r.values.size()) + " values, expected " +
                        std::to_string(expected_len));

    if (!label_values.count(key)) {
      label_values[key] = static_cast<double>(label);
      label_order.push_back(key);
    }
    raw.push_back(std::move(r));
  }
  if (raw.empty()) throw parse_error("'" + path + "' has no data rows");

  return assemble(std::move(raw), sort_label_keys(label_values, label_order), options, path);
}

LabeledDataset load_json(const std::string& path, const LoadOptions& options) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("'" + path + "': " + e.what());
  }

  auto fail = [&](const std::string& why) -> parse_error {
    return parse_error("'" + path + "': " + why);
  };
  if (!doc.is_object() || !doc.contains("version") || doc.at("version") != 1)
    throw fail("expected an object with version 1");
  if (!doc.contains("examples") || !doc.at("examples").is_array() ||
      doc.at("examples").empty())
    throw fail("expected a non-empty 'examples' array");

  std::vector<RawExample> raw;
  std::map<std::string, double> numeric_values;
  std::vector<std::string> label_order;
  bool any_string = false, any_number = false;
  std::size_t common_dim = 0, common_len = 0;

  for (std::size_t n = 0; n < doc.at("examples").size(); ++n) {
    const auto& ex = doc.at("examples")[n];
    const std::string where = "example " + std::to_string(n + 1);
    if (!ex.is_object() || !ex.contains("label") || !ex.contains("series"))
      throw fail(where + " needs 'label' and 'series'");

    RawExample r;
    const auto& label = ex.at("label");
    if (label.is_string()) {
      any_string = true;
      r.label_key = label.get<std::string>();
    } else if (label.is_number()) {
      any_number = true;
      const long v = integral_label(label.get<double>(), where);
      r.label_key = format_double(static_cast<double>(v));
      numeric_values[r.label_key] = static_cast<double>(v);
    } else {
      throw fail(where + ": label must be a string or number");
    }
    if (any_string && any_number) throw fail("labels mix strings and numbers");

    const auto& series = ex.at("series");
    if (!series.is_array() || series.empty()) throw fail(where + ": empty series");
    if (series[0].is_array()) {
      r.dim = series[0].size();
      if (r.dim == 0) throw fail(where + ": empty point");
      for (const auto& point : series) {
        if (!point.is_array() || point.size() != r.dim)
          throw fail(where + ": points have inconsistent dimension");
        for (const auto& v : point) {
          if (!v.is_number()) throw fail(where + ": non-numeric value");
          r.values.push_back(v.get<double>());
        }
      }
    } else {
      r.dim = 1;
      for (const auto& v : series) {
        if (!v.is_number()) throw fail(where + ": non-numeric value");
        r.values.push_back(v.get<double>());
      }
    }
    if (common_dim == 0) common_dim = r.dim;
    if (r.dim != common_dim) throw fail(where + ": dimension differs from earlier examples");
    const std::size_t len = r.values.size() / r.dim;
    if (common_len == 0) common_len = len;
    if (options.strict_lengths && len != common_len)
      throw fail(where + ": " + std::to_string(len) + " points, expected " +
                 std::to_string(common_len));

    if (std::find(label_order.begin(), label_order.end(), r.label_key) ==
        label_order.end())
      label_order.push_back(r.label_key);
    raw.push_back(std::move(r));
  }

  std::vector<std::string> ordered = label_order;
  if (any_number)
    ordered = sort_label_keys(numeric_values, label_order);
  else
    std::sort(ordered.begin(), ordered.end());

  return assemble(std::move(raw), ordered, options, path);
}

bool has_json_suffix(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

} // namespace

LabeledDataset load_dataset(const std::string& path, const LoadOptions& options) {
  return has_json_suffix(path) ? load_json(path, options) : load_delimited(path, options);
}

void save_dataset(const LabeledDataset& D, const std::string& path) {
  const auto raw_label = [&](int id) -> std::string {
    if (!D.raw_labels().empty()) return D.raw_labels()[id - 1];
    return std::to_string(id);
  };

  if (has_json_suffix(path)) {
    ordered_json doc;
    doc["version"] = 1;
    auto& examples = doc["examples"] = ordered_json::array();
    for (const auto& ex : D.examples()) {
      ordered_json e;
      const auto text = raw_label(ex.label);
      double numeric = 0.0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), numeric);
      if (ec == std::errc{} && p == text.data() + text.size())
        e["label"] = static_cast<long>(numeric);
      else
        e["label"] = text;

      if (ex.series.dim() == 1) {
        e["series"] = ex.series.values();
      } else {
        auto& series = e["series"] = ordered_json::array();
        for (std::size_t t = 0; t < ex.series.length(); ++t) {
          const auto point = ex.series.point(t);
          series.push_back(std::vector<double>(point.begin(), point.end()));
        }
      }
      examples.push_back(std::move(e));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
    return;
  }

  if (D.dim() != 1)
    throw input_error("delimited output is univariate; use a .json path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  for (const auto& ex : D.examples()) {
    out << raw_label(ex.label);
    for (double v : ex.series.values()) out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace dtwlvq
