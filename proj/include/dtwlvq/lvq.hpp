#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtwlvq/dataset.hpp"
#include "dtwlvq/timeseries.hpp"

namespace dtwlvq {

struct LabeledPrototype {
  TimeSeries series;
  int label;
};

/// A non-empty ordered set of labeled prototypes.
class Codebook {
public:
  explicit Codebook(std::vector<LabeledPrototype> prototypes);

  std::size_t size() const { return prototypes_.size(); }
  const LabeledPrototype& operator[](std::size_t i) const { return prototypes_[i]; }
  const std::vector<LabeledPrototype>& prototypes() const { return prototypes_; }

  /// True when every class 1..num_classes has at least one prototype.
  bool covers_classes(int num_classes) const;

  void replace_series(std::size_t i, TimeSeries series);

private:
  std::vector<LabeledPrototype> prototypes_;
};

/// Index of the prototype minimizing the DTW distance to x
/// (ties broken toward the lowest index).
std::size_t nearest_prototype(const Codebook& cb, const TimeSeries& x);

/// Per-prototype forces. skip is set when the input must be ignored
/// (GLVQ singularity or non-unique closest prototypes); all forces are
/// zero in that case. kappa carries the GLVQ relative distance when defined.
struct ForceResult {
  std::vector<double> forces;
  bool skip = false;
  std::optional<double> kappa;
};

/// LVQ1: +1 at the best-matching prototype when labels agree, -1 when
/// they disagree, 0 elsewhere.
ForceResult lvq1_force(const Codebook& cb, const TimeSeries& x, int label);

/// GLVQ with sigmoid slope sigma: with squared DTW distortions d+ (closest
/// prototype of the same label) and d- (closest of a different label),
/// kappa = (d+ - d-)/(d+ + d-), h'(u) = h(u)(1 - h(u)),
/// force +h'(kappa)*d-/(d+ + d-)^2 at p+, -h'(kappa)*d+/(d+ + d-)^2 at p-.
/// The input is skipped when d+ + d- = 0 or when p+ or p- is not unique
/// (exact tie of the two smallest relevant distortions).
/// Throws model_error when no same-label or no different-label prototype exists.
ForceResult glvq_force(const Codebook& cb, const TimeSeries& x, int label, double sigma);

/// Variants taking precomputed squared DTW distortions to each prototype.
ForceResult lvq1_force_from(const std::vector<double>& sq_dist, const Codebook& cb, int label);
ForceResult glvq_force_from(const std::vector<double>& sq_dist, const Codebook& cb, int label,
                            double sigma);

/// p - eta*force*(Vp - Wx) along the deterministic optimal path of
/// dtw(p, x). force = 0 returns p unchanged without computing a path.
TimeSeries apply_asymmetric_update(const TimeSeries& p, const TimeSeries& x,
                                   double eta, double force);

/// Symmetric weighted average with alpha = eta*force along the
/// deterministic optimal path, resampled back to len(p).
TimeSeries apply_symmetric_update(const TimeSeries& p, const TimeSeries& x,
                                  double eta, double force);

struct GlvqCost {
  double cost = 0.0;
  /// Examples hitting the d+ + d- = 0 singularity; they contribute 0.
  std::size_t singular = 0;
};

/// Sum of h(kappa(x)) over the dataset at sigmoid slope sigma.
GlvqCost glvq_cost(const Codebook& cb, const LabeledDataset& D, double sigma);

enum class Method { AsymmetricLvq1, SymmetricLvq1, AsymmetricGlvq };

std::string method_name(Method m);

struct TrainConfig {
  Method method = Method::AsymmetricLvq1;
  /// Initial learning rate (LVQ1 variants); decays linearly across epochs.
  double eta0 = 0.05;
  /// Initial sigmoid slope (GLVQ); grows linearly across epochs. The GLVQ
  /// learning rate is fixed at 1.
  double sigma0 = 1.0;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct TrainReport {
  /// Training error rate per epoch, counted as examples are visited.
  std::vector<double> error_rate;
  /// GLVQ cost accumulated per epoch at that epoch's slope (GLVQ only).
  std::vector<double> cost;
  std::size_t epochs_run = 0;
  std::size_t skipped_inputs = 0;
};

struct TrainResult {
  Codebook codebook;
  TrainReport report;
};

/// Epoch-wise online training: per epoch the dataset is visited in a
/// seeded shuffled order (or in order when shuffle is off), forces are
/// computed per the configured method and every prototype with a nonzero
/// force is updated. Prototype lengths and labels never change. Stops
/// after max_epochs epochs, or earlier when an epoch applies no update.
TrainResult train(const LabeledDataset& D, const Codebook& init, const TrainConfig& config);

/// JSON serialization with stable field order and round-tripping values.
std::string codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const std::string& text);
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

} // namespace dtwlvq
