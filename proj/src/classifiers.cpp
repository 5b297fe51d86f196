#include "dtwlvq/classifiers.hpp"

#include <algorithm>
#include <limits>

#include "dtwlvq/averaging.hpp"
#include "dtwlvq/dtw.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/rng.hpp"

namespace dtwlvq {

int classify(const Codebook& cb, const TimeSeries& x) {
  return cb[nearest_prototype(cb, x)].label;
}

double accuracy(const Codebook& cb, const LabeledDataset& D) {
  std::size_t correct = 0;
  for (const auto& ex : D.examples())
    if (classify(cb, ex.series) == ex.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(D.size());
}

namespace {

double objective(const std::vector<TimeSeries>& members,
                 const std::vector<TimeSeries>& centroids) {
  double sum = 0.0;
  for (const auto& x : members) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : centroids) best = std::min(best, dtw_squared(c, x));
    sum += best;
  }
  return sum;
}

KmeansClassTrace lloyd(const std::vector<TimeSeries>& members, int label, std::size_t k,
                       std::size_t max_iter, std::uint64_t seed, std::size_t dba_max_iter,
                       bool trace, std::vector<TimeSeries>& centroids) {
  const std::size_t n = members.size();
  KmeansClassTrace out{label, {}, {}};

  Rng rng(mix_seed(seed, {0x6b, static_cast<std::uint64_t>(label)}));
  centroids.clear();
  for (std::size_t idx : rng.sample_without_replacement(n, k)) centroids.push_back(members[idx]);
  if (trace) out.objective.push_back(objective(members, centroids));

  std::vector<std::size_t> assignment(n, 0), previous;
  for (std::size_t round = 0; round < max_iter; ++round) {
    std::vector<double> assigned_dist(n);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = dtw_squared(centroids[c], members[i]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assignment[i] = best;
      assigned_dist[i] = best_d;
      ++counts[best];
    }

    // empty clusters steal the member farthest from its own centroid,
    // never the last member of another cluster
    for (std::size_t c = 0; c < k; ++c) {
      while (counts[c] == 0) {
        std::size_t donor = n;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i)
          if (counts[assignment[i]] > 1 && assigned_dist[i] > worst) {
            worst = assigned_dist[i];
            donor = i;
          }
        --counts[assignment[donor]];
        assignment[donor] = c;
        assigned_dist[donor] = 0.0;
        centroids[c] = members[donor];
        ++counts[c];
      }
    }

    if (assignment == previous) break;
    previous = assignment;

    for (std::size_t c = 0; c < k; ++c) {
      std::vector<TimeSeries> cluster;
      for (std::size_t i = 0; i < n; ++i)
        if (assignment[i] == c) cluster.push_back(members[i]);
      centroids[c] = dba_mean(cluster, centroids[c], dba_max_iter);
    }
    if (trace) out.objective.push_back(objective(members, centroids));
  }

  out.assignment = std::move(assignment);
  return out;
}

} // namespace

KmeansResult kmeans_per_class_detailed(const LabeledDataset& D, std::size_t k,
                                       std::size_t max_iter, std::uint64_t seed,
                                       std::size_t dba_max_iter) {
  if (k == 0) throw input_error("k must be positive");
  if (max_iter == 0) throw input_error("max_iter must be positive");

  KmeansResult result{Codebook({{D[0].series, 1}}), {}};
  std::vector<LabeledPrototype> prototypes;
  for (int label = 1; label <= D.num_classes(); ++label) {
    std::vector<TimeSeries> members;
    for (const auto& ex : D.examples())
      if (ex.label == label) members.push_back(ex.series);
    if (members.size() < k)
      throw input_error("class " + std::to_string(label) + " has fewer than k members");

    if (k == 1) {
      const auto r = dba_mean_detailed(members, members[medoid_index(members)], dba_max_iter);
      prototypes.push_back({r.mean, label});
      result.traces.push_back({label, r.variation, {}});
    } else {
      std::vector<TimeSeries> centroids;
      auto t = lloyd(members, label, k, max_iter, seed, dba_max_iter, true, centroids);
      for (auto& c : centroids) prototypes.push_back({std::move(c), label});
      result.traces.push_back(std::move(t));
    }
  }
  result.codebook = Codebook(std::move(prototypes));
  return result;
}

Codebook kmeans_per_class(const LabeledDataset& D, std::size_t k, std::size_t max_iter,
                          std::uint64_t seed, std::size_t dba_max_iter) {
  if (k == 0) throw input_error("k must be positive");
  if (max_iter == 0) throw input_error("max_iter must be positive");

  std::vector<LabeledPrototype> prototypes;
  for (int label = 1; label <= D.num_classes(); ++label) {
    std::vector<TimeSeries> members;
    for (const auto& ex : D.examples())
      if (ex.label == label) members.push_back(ex.series);
    if (members.size() < k)
      throw input_error("class " + std::to_string(label) + " has fewer than k members");

    if (k == 1) {
      prototypes.push_back({dba_mean(members, members[medoid_index(members)], dba_max_iter), label});
    } else {
      std::vector<TimeSeries> centroids;
      lloyd(members, label, k, max_iter, seed, dba_max_iter, false, centroids);
      for (auto& c : centroids) prototypes.push_back({std::move(c), label});
    }
  }
  return Codebook(std::move(prototypes));
}

} // namespace dtwlvq
