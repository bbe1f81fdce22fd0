#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "posdiv/corpus.hpp"
#include "posdiv/errors.hpp"
#include "posdiv/metrics.hpp"
#include "posdiv/perturb.hpp"

namespace posdiv {

enum class Preference { prefer_1, prefer_2, tie };

inline const char* preference_code(Preference preference) {
  switch (preference) {
    case Preference::prefer_1: return "1";
    case Preference::prefer_2: return "2";
    default: return "tie";
  }
}

inline Preference parse_preference(std::string_view code) {
  if (code == "1") return Preference::prefer_1;
  if (code == "2") return Preference::prefer_2;
  if (code == "tie") return Preference::tie;
  throw ParseError("invalid preference '" + std::string(code) +
                   "' (expected \"1\", \"2\" or \"tie\")");
}

// One categorical judgment for a (reference, candidate pair) item; the unit
// of kappa computation.
struct PreferenceLabel {
  std::string item_id;
  Preference preference = Preference::tie;

  friend bool operator==(const PreferenceLabel&,
                         const PreferenceLabel&) = default;
};

struct KappaReport {
  double kappa = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  std::size_t n_items = 0;
  // Set when expected agreement is 1 (both raters emit a single identical
  // category); the kappa formula is undefined there and the reported value
  // is 1.0 when observed agreement is perfect, else 0.0.
  bool degenerate = false;
  std::size_t n_dropped_a = 0;  // items of A with no partner in B
  std::size_t n_dropped_b = 0;
};

enum class PreferenceMetric { pdd, exact_match };

// Decides which candidate the metric prefers against the reference. PDD is a
// distance (lower wins); exact match is a similarity (higher wins). Scores
// within tie_tolerance of each other give a tie. The item id is the
// reference's base id.
inline PreferenceLabel metric_preference(const LabeledArticle& reference,
                                         const LabeledArticle& candidate_1,
                                         const LabeledArticle& candidate_2,
                                         const DiscourseSchema& schema,
                                         std::size_t bin_count,
                                         const SmoothingConfig& smoothing = {},
                                         double tie_tolerance = 0.0,
                                         PreferenceMetric metric =
                                             PreferenceMetric::pdd) {
  if (tie_tolerance < 0.0)
    throw InvalidArgument("tie tolerance must be non-negative");

  double score_1 = 0.0;  // oriented so that larger means preferred
  double score_2 = 0.0;
  if (metric == PreferenceMetric::pdd) {
    score_1 = -pdd_paired(reference, candidate_1, schema, bin_count, smoothing).value;
    score_2 = -pdd_paired(reference, candidate_2, schema, bin_count, smoothing).value;
  } else {
    score_1 = exact_match(reference, candidate_1).value;
    score_2 = exact_match(reference, candidate_2).value;
  }

  Preference preference = Preference::tie;
  if (score_1 > score_2 + tie_tolerance)
    preference = Preference::prefer_1;
  else if (score_2 > score_1 + tie_tolerance)
    preference = Preference::prefer_2;
  return {base_id(reference.id), preference};
}

// Cohen's kappa over the three preference categories. The two lists are
// joined on item_id; unmatched items are dropped and counted.
inline KappaReport cohens_kappa(std::span<const PreferenceLabel> labels_a,
                                std::span<const PreferenceLabel> labels_b) {
  if (labels_a.empty() || labels_b.empty())
    throw ValidationError("preference label lists must be non-empty");

  const auto index_labels = [](std::span<const PreferenceLabel> labels,
                               const char* side) {
    std::unordered_map<std::string, Preference> by_id;
    by_id.reserve(labels.size());
    for (const PreferenceLabel& label : labels) {
      if (!by_id.emplace(label.item_id, label.preference).second)
        throw ValidationError(std::string("duplicate item_id '") +
                              label.item_id + "' in " + side);
    }
    return by_id;
  };
  const auto by_id_a = index_labels(labels_a, "labels A");
  const auto by_id_b = index_labels(labels_b, "labels B");

  std::size_t joined = 0;
  std::size_t equal = 0;
  std::size_t count_a[3] = {0, 0, 0};
  std::size_t count_b[3] = {0, 0, 0};
  for (const auto& [id, pref_a] : by_id_a) {
    const auto it = by_id_b.find(id);
    if (it == by_id_b.end()) continue;
    ++joined;
    equal += pref_a == it->second;
    ++count_a[static_cast<int>(pref_a)];
    ++count_b[static_cast<int>(it->second)];
  }
  if (joined == 0)
    throw ValidationError("no common item ids between the two label lists");

  KappaReport report;
  report.n_items = joined;
  report.n_dropped_a = by_id_a.size() - joined;
  report.n_dropped_b = by_id_b.size() - joined;
  const double n = static_cast<double>(joined);
  report.observed_agreement = static_cast<double>(equal) / n;
  double expected = 0.0;
  for (int c = 0; c < 3; ++c)
    expected += (static_cast<double>(count_a[c]) / n) *
                (static_cast<double>(count_b[c]) / n);
  report.expected_agreement = expected;
  if (expected >= 1.0) {
    report.degenerate = true;
    report.kappa = report.observed_agreement == 1.0 ? 1.0 : 0.0;
  } else {
    report.kappa = (report.observed_agreement - expected) / (1.0 - expected);
  }
  return report;
}

// Preference label file format: JSONL, one judgment per line:
//   {"item_id": string, "preference": "1" | "2" | "tie"}
// This is the ingestion format for externally produced judgments.
inline std::vector<PreferenceLabel> load_preference_labels(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file: " + path.string());
  std::vector<PreferenceLabel> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_number);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("item_id") ||
        !rec["item_id"].is_string() || !rec.contains("preference") ||
        !rec["preference"].is_string())
      throw ParseError(where +
                       ": expected {\"item_id\": string, \"preference\": string}");
    try {
      labels.push_back({rec["item_id"].get<std::string>(),
                        parse_preference(rec["preference"].get<std::string>())});
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return labels;
}

inline void write_preference_labels(std::span<const PreferenceLabel> labels,
                                    std::ostream& out) {
  for (const PreferenceLabel& label : labels) {
    nlohmann::ordered_json rec;
    rec["item_id"] = label.item_id;
    rec["preference"] = preference_code(label.preference);
    out << rec.dump() << '\n';
  }
}

inline void write_preference_labels(std::span<const PreferenceLabel> labels,
                                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path.string());
  write_preference_labels(labels, out);
  out.flush();
  if (!out) throw IoError("failed writing labels to " + path.string());
}

}  // namespace posdiv
