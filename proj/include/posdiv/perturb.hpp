#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "posdiv/binning.hpp"
#include "posdiv/corpus.hpp"
#include "posdiv/errors.hpp"
#include "posdiv/rng.hpp"

namespace posdiv {

// Variation 1 shuffles the whole article; variation 2 samples a bin count B
// and shuffles only within each of the B positional bins, so coarse
// structure survives.
enum class Variation { full_shuffle, within_bin_shuffle };

inline const char* variation_tag(Variation variation) {
  return variation == Variation::full_shuffle ? "#v1" : "#v2";
}

// Strips a trailing "#v<digits>" variation tag, if present. Pairing and
// preference joins run on base ids so perturbed corpora line up with their
// sources.
inline std::string base_id(std::string_view id) {
  const auto pos = id.rfind('#');
  if (pos == std::string_view::npos) return std::string(id);
  const std::string_view tail = id.substr(pos + 1);
  if (tail.size() < 2 || tail[0] != 'v') return std::string(id);
  for (std::size_t i = 1; i < tail.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tail[i])))
      return std::string(id);
  return std::string(id.substr(0, pos));
}

struct PerturbationSpec {
  Variation variation = Variation::full_shuffle;
  std::uint64_t seed = 0;
  // Inclusive sampling range for the variation-2 bin count; the upper bound
  // defaults to the article length. Lower bound 2 keeps variation 2 from
  // degenerating into a full shuffle.
  std::uint32_t bin_range_lo = 2;
  std::optional<std::uint32_t> bin_range_hi;
};

inline void validate_spec(const PerturbationSpec& spec) {
  if (spec.bin_range_lo < 2)
    throw InvalidArgument("bin range lower bound must be >= 2");
  if (spec.bin_range_hi && *spec.bin_range_hi < spec.bin_range_lo)
    throw InvalidArgument("bin range upper bound must be >= lower bound");
}

// Deterministic in (article, spec): the RNG substream is derived from
// (spec.seed, article.id), so corpus order and subsetting never change the
// result for any single article. Roles and sentences are permuted jointly;
// the output id carries the variation tag.
inline LabeledArticle perturb_article(const LabeledArticle& article,
                                      const PerturbationSpec& spec) {
  validate_spec(spec);
  const std::size_t length = article.length();
  if (length == 0)
    throw ValidationError("article '" + article.id + "': empty role sequence");
  std::mt19937_64 engine(rng::derive_stream_seed(spec.seed, article.id));

  std::vector<std::size_t> perm(length);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  if (spec.variation == Variation::full_shuffle) {
    rng::fisher_yates(engine, perm, 0, length);
  } else {
    const std::uint64_t lo = spec.bin_range_lo;
    std::uint64_t hi = length;
    if (spec.bin_range_hi) hi = std::min<std::uint64_t>(hi, *spec.bin_range_hi);
    if (hi >= lo) {
      const std::uint64_t bins = lo + rng::bounded(engine, hi - lo + 1);
      const BinAssignment assignment =
          assign_bins(length, static_cast<std::size_t>(bins));
      for (const IndexRange& range : assignment.boundaries)
        rng::fisher_yates(engine, perm, range.begin, range.end);
    }
    // hi < lo: the article is too short to split; leave it unshuffled.
  }

  LabeledArticle out;
  out.id = article.id + variation_tag(spec.variation);
  out.roles.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    out.roles.push_back(article.roles[perm[i]]);
  if (article.sentences) {
    std::vector<std::string> sentences;
    sentences.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
      sentences.push_back((*article.sentences)[perm[i]]);
    out.sentences = std::move(sentences);
  }
  out.meta = article.meta;
  return out;
}

// Applies perturb_article to every article; output order matches input
// order. Per-article substreams make the mapping independent of ordering.
inline Corpus perturb_corpus(const Corpus& corpus,
                             const PerturbationSpec& spec) {
  validate_spec(spec);
  Corpus out{corpus.schema, {}};
  out.articles.reserve(corpus.articles.size());
  for (const LabeledArticle& article : corpus.articles)
    out.articles.push_back(perturb_article(article, spec));
  return out;
}

}  // namespace posdiv
