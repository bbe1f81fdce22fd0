#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "posdiv/corpus.hpp"
#include "posdiv/errors.hpp"
#include "posdiv/schema.hpp"

namespace posdiv {

struct IndexRange {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  std::size_t size() const noexcept { return end - begin; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Partition of the sentence positions [0, S) into N contiguous bins.
// Sentence i lands in bin floor(i*N/S), so bin sizes differ by at most one
// and every bin is non-empty as long as N <= S.
struct BinAssignment {
  std::size_t article_length = 0;
  std::size_t bin_count = 0;
  std::vector<IndexRange> boundaries;

  std::size_t bin_of(std::size_t index) const noexcept {
    return index * bin_count / article_length;
  }
};

inline BinAssignment assign_bins(std::size_t article_length,
                                 std::size_t bin_count) {
  if (bin_count == 0) throw InvalidArgument("bin count must be positive");
  if (article_length == 0)
    throw InvalidArgument("article length must be positive");
  if (bin_count > article_length)
    throw BinCountExceedsLength("", article_length, bin_count);

  BinAssignment assignment;
  assignment.article_length = article_length;
  assignment.bin_count = bin_count;
  assignment.boundaries.reserve(bin_count);
  for (std::size_t n = 0; n < bin_count; ++n) {
    // Bin n holds {i : floor(i*N/S) == n} = [ceil(n*S/N), ceil((n+1)*S/N)).
    const std::size_t begin = (n * article_length + bin_count - 1) / bin_count;
    const std::size_t end =
        ((n + 1) * article_length + bin_count - 1) / bin_count;
    assignment.boundaries.push_back({begin, end});
  }
  return assignment;
}

// Per-bin role frequency densities: an N x R row-major matrix. Every row
// with a positive support count sums to 1.
class BinnedDistribution {
 public:
  BinnedDistribution(std::size_t bin_count, std::size_t role_count)
      : bin_count_(bin_count),
        role_count_(role_count),
        densities_(bin_count * role_count, 0.0),
        support_(bin_count, 0) {}

  std::size_t bin_count() const noexcept { return bin_count_; }
  std::size_t role_count() const noexcept { return role_count_; }

  double density(std::size_t bin, std::size_t role) const {
    return densities_[bin * role_count_ + role];
  }
  std::span<const double> row(std::size_t bin) const {
    return {densities_.data() + bin * role_count_, role_count_};
  }
  std::size_t support_count(std::size_t bin) const { return support_[bin]; }

  // Normalizes per-bin role counts by the per-bin sentence totals.
  static BinnedDistribution from_counts(
      const std::vector<std::vector<std::size_t>>& counts,
      std::size_t role_count) {
    BinnedDistribution dist(counts.size(), role_count);
    for (std::size_t n = 0; n < counts.size(); ++n) {
      std::size_t total = 0;
      for (std::size_t r = 0; r < role_count; ++r) total += counts[n][r];
      dist.support_[n] = total;
      if (total == 0) continue;
      for (std::size_t r = 0; r < role_count; ++r)
        dist.densities_[n * role_count + r] =
            static_cast<double>(counts[n][r]) / static_cast<double>(total);
    }
    return dist;
  }

  friend bool operator==(const BinnedDistribution&,
                         const BinnedDistribution&) = default;

 private:
  std::size_t bin_count_;
  std::size_t role_count_;
  std::vector<double> densities_;
  std::vector<std::size_t> support_;
};

namespace detail {

inline void accumulate_bin_counts(const LabeledArticle& article,
                                  const DiscourseSchema& schema,
                                  const BinAssignment& assignment,
                                  std::vector<std::vector<std::size_t>>& counts) {
  for (std::size_t n = 0; n < assignment.bin_count; ++n) {
    const IndexRange& range = assignment.boundaries[n];
    for (std::size_t i = range.begin; i < range.end; ++i) {
      const auto role = schema.index_of(article.roles[i]);
      if (!role)
        throw ValidationError("article '" + article.id + "': unknown role '" +
                              article.roles[i] + "' at position " +
                              std::to_string(i));
      ++counts[n][*role];
    }
  }
}

}  // namespace detail

inline BinnedDistribution positional_distribution(const LabeledArticle& article,
                                                  const DiscourseSchema& schema,
                                                  std::size_t bin_count) {
  if (bin_count > article.length())
    throw BinCountExceedsLength(article.id, article.length(), bin_count);
  const BinAssignment assignment = assign_bins(article.length(), bin_count);
  std::vector<std::vector<std::size_t>> counts(
      bin_count, std::vector<std::size_t>(schema.role_count(), 0));
  detail::accumulate_bin_counts(article, schema, assignment, counts);
  return BinnedDistribution::from_counts(counts, schema.role_count());
}

struct PoolingOptions {
  bool skip_short = false;  // drop articles shorter than the bin count
};

struct PooledDistribution {
  BinnedDistribution distribution;
  std::vector<std::string> article_ids;  // articles that contributed
  std::vector<std::string> skipped_ids;  // dropped by skip_short
};

// Bins each article by its own length, sums raw role counts across articles
// per bin, then normalizes each bin row by its pooled sentence count.
inline PooledDistribution pooled_distribution(
    std::span<const LabeledArticle> articles, const DiscourseSchema& schema,
    std::size_t bin_count, const PoolingOptions& options = {}) {
  if (articles.empty())
    throw ValidationError("cannot pool an empty article list");
  if (bin_count == 0) throw InvalidArgument("bin count must be positive");

  std::vector<std::vector<std::size_t>> counts(
      bin_count, std::vector<std::size_t>(schema.role_count(), 0));
  std::vector<std::string> used;
  std::vector<std::string> skipped;
  for (const LabeledArticle& article : articles) {
    if (article.length() < bin_count) {
      if (!options.skip_short)
        throw BinCountExceedsLength(article.id, article.length(), bin_count);
      skipped.push_back(article.id);
      continue;
    }
    const BinAssignment assignment = assign_bins(article.length(), bin_count);
    detail::accumulate_bin_counts(article, schema, assignment, counts);
    used.push_back(article.id);
  }
  if (used.empty())
    throw ValidationError("all articles are shorter than bin count " +
                          std::to_string(bin_count));
  return {BinnedDistribution::from_counts(counts, schema.role_count()),
          std::move(used), std::move(skipped)};
}

}  // namespace posdiv
