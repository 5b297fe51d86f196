#include "dtwlvq/lvq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dtwlvq/averaging.hpp"
#include "dtwlvq/dtw.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/rng.hpp"

namespace dtwlvq {

namespace {

double sigmoid(double u, double sigma) { return 1.0 / (1.0 + std::exp(-sigma * u)); }

std::vector<double> squared_distortions(const Codebook& cb, const TimeSeries& x) {
  std::vector<double> d(cb.size());
  for (std::size_t k = 0; k < cb.size(); ++k) d[k] = dtw_squared(cb[k].series, x);
  return d;
}

std::size_t argmin(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] < v[best]) best = k;
  return best;
}

} // namespace

Codebook::Codebook(std::vector<LabeledPrototype> prototypes)
    : prototypes_(std::move(prototypes)) {
  if (prototypes_.empty()) throw model_error("codebook must contain at least one prototype");
  for (const auto& p : prototypes_)
    if (p.label < 1) throw model_error("prototype labels must be positive");
}

bool Codebook::covers_classes(int num_classes) const {
  std::set<int> seen;
  for (const auto& p : prototypes_) seen.insert(p.label);
  for (int c = 1; c <= num_classes; ++c)
    if (!seen.count(c)) return false;
  return true;
}

void Codebook::replace_series(std::size_t i, TimeSeries series) {
  prototypes_[i].series = std::move(series);
}

std::size_t nearest_prototype(const Codebook& cb, const TimeSeries& x) {
  return argmin(squared_distortions(cb, x));
}

ForceResult lvq1_force_from(const std::vector<double>& sq_dist, const Codebook& cb, int label) {
  ForceResult r;
  r.forces.assign(cb.size(), 0.0);
  const std::size_t best = argmin(sq_dist);
  r.forces[best] = cb[best].label == label ? 1.0 : -1.0;
  return r;
}

ForceResult glvq_force_from(const std::vector<double>& sq_dist, const Codebook& cb, int label,
                            double sigma) {
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::size_t plus = npos, minus = npos;
  bool plus_tied = false, minus_tied = false;
  for (std::size_t k = 0; k < cb.size(); ++k) {
    if (cb[k].label == label) {
      if (plus == npos || sq_dist[k] < sq_dist[plus]) {
        plus = k;
        plus_tied = false;
      } else if (sq_dist[k] == sq_dist[plus]) {
        plus_tied = true;
      }
    } else {
      if (minus == npos || sq_dist[k] < sq_dist[minus]) {
        minus = k;
        minus_tied = false;
      } else if (sq_dist[k] == sq_dist[minus]) {
        minus_tied = true;
      }
    }
  }
  if (plus == npos) throw model_error("codebook has no prototype with the input's label");
  if (minus == npos) throw model_error("codebook has no prototype with a different label");

  ForceResult r;
  r.forces.assign(cb.size(), 0.0);
  const double dplus = sq_dist[plus], dminus = sq_dist[minus];
  const double denom = dplus + dminus;
  if (denom == 0.0) {
    r.skip = true;
    return r;
  }
  r.kappa = (dplus - dminus) / denom;
  if (plus_tied || minus_tied) {
    r.skip = true;
    return r;
  }
  const double h = sigmoid(*r.kappa, sigma);
  const double hprime = h * (1.0 - h);
  r.forces[plus] = hprime * dminus / (denom * denom);
  r.forces[minus] = -hprime * dplus / (denom * denom);
  return r;
}

ForceResult lvq1_force(const Codebook& cb, const TimeSeries& x, int label) {
  return lvq1_force_from(squared_distortions(cb, x), cb, label);
}

ForceResult glvq_force(const Codebook& cb, const TimeSeries& x, int label, double sigma) {
  return glvq_force_from(squared_distortions(cb, x), cb, label, sigma);
}

TimeSeries apply_asymmetric_update(const TimeSeries& p, const TimeSeries& x,
                                   double eta, double force) {
  if (!std::isfinite(eta) || !std::isfinite(force))
    throw input_error("eta and force must be finite");
  if (force == 0.0) return p;
  const auto r = dtw(p, x);
  const std::size_t d = p.dim();
  const double step = eta * force;
  // p' = p - step * (Vp - Wx), streamed over the path
  std::vector<double> delta(p.values().size(), 0.0);
  std::vector<std::uint32_t> valence(p.length(), 0);
  for (const auto& pt : r.path.points()) {
    ++valence[pt.i - 1];
    const auto xj = x.point(pt.j - 1);
    for (std::size_t c = 0; c < d; ++c) delta[(pt.i - 1) * d + c] -= xj[c];
  }
  std::vector<double> out(p.values().size());
  for (std::size_t i = 0; i < p.length(); ++i) {
    const auto pi = p.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      const double vpwx = static_cast<double>(valence[i]) * pi[c] + delta[i * d + c];
      out[i * d + c] = pi[c] - step * vpwx;
    }
  }
  return TimeSeries(std::move(out), d);
}

TimeSeries apply_symmetric_update(const TimeSeries& p, const TimeSeries& x,
                                  double eta, double force) {
  if (!std::isfinite(eta) || !std::isfinite(force))
    throw input_error("eta and force must be finite");
  const auto r = dtw(p, x);
  return resample(symmetric_weighted_average(p, x, eta * force, r.path), p.length());
}

GlvqCost glvq_cost(const Codebook& cb, const LabeledDataset& D, double sigma) {
  GlvqCost out;
  for (const auto& ex : D.examples()) {
    const auto d = squared_distortions(cb, ex.series);
    double dplus = std::numeric_limits<double>::infinity();
    double dminus = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cb.size(); ++k) {
      if (cb[k].label == ex.label)
        dplus = std::min(dplus, d[k]);
      else
        dminus = std::min(dminus, d[k]);
    }
    if (std::isinf(dplus))
      throw model_error("codebook has no prototype with the input's label");
    if (std::isinf(dminus))
      throw model_error("codebook has no prototype with a different label");
    if (dplus + dminus == 0.0) {
      ++out.singular;
      continue;
    }
    out.cost += sigmoid((dplus - dminus) / (dplus + dminus), sigma);
  }
  return out;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::AsymmetricLvq1: return "asymmetric-lvq1";
    case Method::SymmetricLvq1: return "symmetric-lvq1";
    default: return "asymmetric-glvq";
  }
}

TrainResult train(const LabeledDataset& D, const Codebook& init, const TrainConfig& config) {
  const bool glvq = config.method == Method::AsymmetricGlvq;
  if (glvq) {
    if (!(config.sigma0 > 0.0) || !std::isfinite(config.sigma0))
      throw config_error("sigma0 must be positive");
  } else {
    if (!(config.eta0 > 0.0) || !std::isfinite(config.eta0))
      throw config_error("eta0 must be positive");
  }
  if (!init.covers_classes(D.num_classes()))
    throw model_error("codebook must cover every class of the training set");
  if (glvq) {
    for (int c = 1; c <= D.num_classes(); ++c) {
      bool other = false;
      for (const auto& p : init.prototypes()) other |= p.label != c;
      if (!other)
        throw model_error("glvq needs a prototype with a different label for every class");
    }
  }

  TrainResult result{init, {}};
  Codebook& cb = result.codebook;
  TrainReport& report = result.report;
  if (config.max_epochs == 0) return result;

  Rng rng(mix_seed(config.seed, {0x7e}));
  std::vector<std::size_t> order(D.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    // LVQ1 decays the rate from eta0 toward zero; GLVQ trains at rate 1
    // with a slope growing linearly from sigma0.
    const double eta =
        glvq ? 1.0
             : config.eta0 * (1.0 - static_cast<double>(epoch) /
                                        static_cast<double>(config.max_epochs));
    const double sigma = config.sigma0 * static_cast<double>(epoch + 1);
    if (config.shuffle) rng.shuffle(order);

    std::size_t errors = 0, updates = 0;
    double epoch_cost = 0.0;
    for (const std::size_t idx : order) {
      const auto& ex = D[idx];
      const auto dists = squared_distortions(cb, ex.series);
      if (cb[argmin(dists)].label != ex.label) ++errors;

      const auto fr = glvq ? glvq_force_from(dists, cb, ex.label, sigma)
                           : lvq1_force_from(dists, cb, ex.label);
      if (fr.kappa) epoch_cost += sigmoid(*fr.kappa, sigma);
      if (fr.skip) {
        ++report.skipped_inputs;
        continue;
      }
      for (std::size_t k = 0; k < cb.size(); ++k) {
        if (fr.forces[k] == 0.0) continue;
        ++updates;
        if (config.method == Method::SymmetricLvq1)
          cb.replace_series(k, apply_symmetric_update(cb[k].series, ex.series, eta, fr.forces[k]));
        else
          cb.replace_series(k, apply_asymmetric_update(cb[k].series, ex.series, eta, fr.forces[k]));
      }
    }

    report.error_rate.push_back(static_cast<double>(errors) / static_cast<double>(D.size()));
    if (glvq) report.cost.push_back(epoch_cost);
    report.epochs_run = epoch + 1;
    if (updates == 0) break;
  }
  return result;
}

std::string codebook_to_json(const Codebook& cb) {
  std::set<int> labels;
  for (const auto& p : cb.prototypes()) labels.insert(p.label);
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["classes"] = labels.size();
  doc["prototypes"] = nlohmann::ordered_json::array();
  for (const auto& p : cb.prototypes()) {
    nlohmann::ordered_json entry;
    entry["label"] = p.label;
    entry["length"] = p.series.length();
    entry["dim"] = p.series.dim();
    entry["values"] = p.series.values();
    doc["prototypes"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

Codebook codebook_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid codebook JSON: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1)
      throw parse_error("unsupported codebook version");
    std::vector<LabeledPrototype> prototypes;
    for (const auto& entry : doc.at("prototypes")) {
      const int label = entry.at("label").get<int>();
      const auto length = entry.at("length").get<std::size_t>();
      const auto dim = entry.at("dim").get<std::size_t>();
      auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != length * dim)
        throw parse_error("prototype value count does not match length * dim");
      prototypes.push_back({TimeSeries(std::move(values), dim), label});
    }
    std::set<int> labels;
    for (const auto& p : prototypes) labels.insert(p.label);
    if (doc.at("classes").get<std::size_t>() != labels.size())
      throw parse_error("codebook class count does not match its labels");
    return Codebook(std::move(prototypes));
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid codebook JSON: ") + e.what());
  } catch (const input_error& e) {
    throw parse_error(std::string("invalid codebook JSON: ") + e.what());
  } catch (const model_error& e) {
    throw parse_error(std::string("invalid codebook JSON: ") + e.what());
  }
}

void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open codebook file for writing: " + path);
  out << codebook_to_json(cb);
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open codebook file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return codebook_from_json(buf.str());
}

} // namespace dtwlvq
