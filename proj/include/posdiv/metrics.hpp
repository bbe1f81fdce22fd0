#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "posdiv/binning.hpp"
#include "posdiv/corpus.hpp"
#include "posdiv/errors.hpp"
#include "posdiv/schema.hpp"

namespace posdiv {

// Smoothing term added inside each KL term. The logarithm is natural and not
// configurable: all divergences are in nats.
struct SmoothingConfig {
  double epsilon = 1e-6;
};

struct MetricReport {
  std::string metric_name;  // "pdd" or "exact_match"
  double value = 0.0;

  // pdd only
  std::size_t bin_count = 0;
  double epsilon = 0.0;
  std::vector<double> per_bin_divergences;

  std::vector<std::string> reference_ids;
  std::vector<std::string> prediction_ids;
  std::vector<std::string> skipped_reference_ids;
  std::vector<std::string> skipped_prediction_ids;
};

// Sum_r (p_r + eps) * ln((p_r + eps) / (q_r + eps)), evaluated literally:
// the smoothed vectors are not renormalized, so they sum to 1 + R*eps.
// Finite for every eps > 0. Callers pass density rows that sum to 1.
inline double kl_divergence_smoothed(std::span<const double> p,
                                     std::span<const double> q,
                                     double epsilon) {
  if (p.size() != q.size())
    throw InvalidArgument("distribution length mismatch: " +
                          std::to_string(p.size()) + " vs " +
                          std::to_string(q.size()));
  if (p.empty()) throw InvalidArgument("empty distribution");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");

  double sum = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (p[r] < 0.0 || q[r] < 0.0)
      throw InvalidArgument("negative density entry");
    const double pr = p[r] + epsilon;
    const double qr = q[r] + epsilon;
    sum += pr * std::log(pr / qr);
  }
  // Equal total mass keeps the true value non-negative; summation rounding
  // may still land a hair below zero.
  return sum < 0.0 ? 0.0 : sum;
}

namespace detail {

inline double mean_smoothed_divergence(const BinnedDistribution& p,
                                       const BinnedDistribution& q,
                                       double epsilon,
                                       std::vector<double>& per_bin) {
  const std::size_t bins = p.bin_count();
  per_bin.clear();
  per_bin.reserve(bins);
  double total = 0.0;
  for (std::size_t n = 0; n < bins; ++n) {
    const double d = kl_divergence_smoothed(p.row(n), q.row(n), epsilon);
    per_bin.push_back(d);
    total += d;
  }
  return total / static_cast<double>(bins);
}

}  // namespace detail

// Positional discourse divergence between one reference and one prediction:
// mean over N positional bins of the smoothed KL divergence of the
// prediction's bin distribution against the reference's. Direction is fixed:
// p is the reference, q the prediction.
inline MetricReport pdd_paired(const LabeledArticle& reference,
                               const LabeledArticle& prediction,
                               const DiscourseSchema& schema,
                               std::size_t bin_count,
                               const SmoothingConfig& smoothing = {}) {
  if (bin_count == 0) throw InvalidArgument("bin count must be positive");
  if (!(smoothing.epsilon > 0.0))
    throw InvalidArgument("epsilon must be positive");
  if (reference.length() < bin_count)
    throw BinCountExceedsLength(reference.id, reference.length(), bin_count);
  if (prediction.length() < bin_count)
    throw BinCountExceedsLength(prediction.id, prediction.length(), bin_count);

  const BinnedDistribution p =
      positional_distribution(reference, schema, bin_count);
  const BinnedDistribution q =
      positional_distribution(prediction, schema, bin_count);

  MetricReport report;
  report.metric_name = "pdd";
  report.bin_count = bin_count;
  report.epsilon = smoothing.epsilon;
  report.reference_ids = {reference.id};
  report.prediction_ids = {prediction.id};
  report.value = detail::mean_smoothed_divergence(p, q, smoothing.epsilon,
                                                  report.per_bin_divergences);
  return report;
}

// Set-level divergence: pools each side into one genre-level distribution
// (articles binned by their own length, counts summed), then averages the
// per-bin smoothed KL. A singleton prediction set scores one article against
// the reference genre.
inline MetricReport pdd_set(std::span<const LabeledArticle> references,
                            std::span<const LabeledArticle> predictions,
                            const DiscourseSchema& schema,
                            std::size_t bin_count,
                            const SmoothingConfig& smoothing = {},
                            const PoolingOptions& pooling = {}) {
  if (bin_count == 0) throw InvalidArgument("bin count must be positive");
  if (!(smoothing.epsilon > 0.0))
    throw InvalidArgument("epsilon must be positive");
  if (references.empty()) throw ValidationError("reference set is empty");
  if (predictions.empty()) throw ValidationError("prediction set is empty");

  const auto count_long_enough = [bin_count](
                                     std::span<const LabeledArticle> articles) {
    std::size_t n = 0;
    for (const LabeledArticle& a : articles) n += a.length() >= bin_count;
    return n;
  };
  if (pooling.skip_short) {
    if (count_long_enough(references) == 0)
      throw ValidationError("reference set: all articles shorter than bin count " +
                            std::to_string(bin_count));
    if (count_long_enough(predictions) == 0)
      throw ValidationError("prediction set: all articles shorter than bin count " +
                            std::to_string(bin_count));
  }

  PooledDistribution p = pooled_distribution(references, schema, bin_count, pooling);
  PooledDistribution q = pooled_distribution(predictions, schema, bin_count, pooling);

  MetricReport report;
  report.metric_name = "pdd";
  report.bin_count = bin_count;
  report.epsilon = smoothing.epsilon;
  report.reference_ids = std::move(p.article_ids);
  report.prediction_ids = std::move(q.article_ids);
  report.skipped_reference_ids = std::move(p.skipped_ids);
  report.skipped_prediction_ids = std::move(q.skipped_ids);
  report.value = detail::mean_smoothed_divergence(
      p.distribution, q.distribution, smoothing.epsilon,
      report.per_bin_divergences);
  return report;
}

// Baseline: fraction of positions whose roles agree one-to-one. The
// denominator is the longer article, so a length mismatch counts the
// unmatched tail as misses. Symmetric in its arguments.
inline MetricReport exact_match(const LabeledArticle& reference,
                                const LabeledArticle& prediction) {
  if (reference.roles.empty())
    throw ValidationError("article '" + reference.id +
                          "': empty role sequence");
  if (prediction.roles.empty())
    throw ValidationError("article '" + prediction.id +
                          "': empty role sequence");

  const std::size_t overlap =
      std::min(reference.length(), prediction.length());
  std::size_t matches = 0;
  for (std::size_t i = 0; i < overlap; ++i)
    matches += reference.roles[i] == prediction.roles[i];

  MetricReport report;
  report.metric_name = "exact_match";
  report.reference_ids = {reference.id};
  report.prediction_ids = {prediction.id};
  report.value = static_cast<double>(matches) /
                 static_cast<double>(
                     std::max(reference.length(), prediction.length()));
  return report;
}

}  // namespace posdiv
