// posdiv: positional discourse structure metrics over labeled corpora.
//
// Subcommands: compute, exact-match, perturb, curve, distributions, prefer,
// agreement. Exit codes: 0 success, 1 internal error, 2 input or validation
// error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "posdiv/posdiv.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

// Report numbers are capped at 12 significant digits so emitted JSON is
// byte-stable and readable.
double round_sig12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

std::string format_sig12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

ordered_json rounded_array(const std::vector<double>& values) {
  ordered_json arr = ordered_json::array();
  for (double v : values) arr.push_back(round_sig12(v));
  return arr;
}

std::string timestamp_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json make_manifest(const std::string& command, ordered_json flags) {
  ordered_json manifest;
  manifest["command"] = command;
  manifest["flags"] = std::move(flags);
  manifest["tool_version"] = posdiv::kVersion;
  manifest["rng_algorithm"] = posdiv::rng::kAlgorithmName;
  manifest["timestamp"] = timestamp_utc();
  return manifest;
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw posdiv::IoError("cannot open output file: " + out_path);
  out << text;
  out.flush();
  if (!out) throw posdiv::IoError("failed writing to " + out_path);
}

// JSONL and CSV outputs keep their body clean: the manifest goes to a
// sidecar file next to --out, or to stderr when printing to stdout.
void emit_manifest_sidecar(const ordered_json& manifest,
                           const std::string& out_path, bool quiet) {
  if (!out_path.empty()) {
    write_text(manifest.dump(2) + "\n", out_path + ".manifest.json");
  } else if (!quiet) {
    std::cerr << manifest.dump() << '\n';
  }
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

struct ArticlePair {
  const posdiv::LabeledArticle* reference;
  const posdiv::LabeledArticle* prediction;
};

// id pairing matches on base ids (variation tags stripped) and emits pairs
// sorted by base id; order pairing zips the two files as given.
std::vector<ArticlePair> make_pairs(const posdiv::Corpus& references,
                                    const posdiv::Corpus& predictions,
                                    const std::string& pairing) {
  std::vector<ArticlePair> pairs;
  if (pairing == "order") {
    if (references.articles.size() != predictions.articles.size())
      throw posdiv::ValidationError(
          "order pairing needs equal corpus sizes, got " +
          std::to_string(references.articles.size()) + " vs " +
          std::to_string(predictions.articles.size()));
    pairs.reserve(references.articles.size());
    for (std::size_t i = 0; i < references.articles.size(); ++i)
      pairs.push_back({&references.articles[i], &predictions.articles[i]});
    return pairs;
  }

  std::unordered_map<std::string, const posdiv::LabeledArticle*> by_base;
  by_base.reserve(predictions.articles.size());
  for (const auto& article : predictions.articles) {
    if (!by_base.emplace(posdiv::base_id(article.id), &article).second)
      throw posdiv::ValidationError("duplicate prediction id '" +
                                    posdiv::base_id(article.id) +
                                    "' after stripping variation tags");
  }
  std::map<std::string, const posdiv::LabeledArticle*> refs_sorted;
  for (const auto& article : references.articles) {
    if (!refs_sorted.emplace(posdiv::base_id(article.id), &article).second)
      throw posdiv::ValidationError("duplicate reference id '" +
                                    posdiv::base_id(article.id) +
                                    "' after stripping variation tags");
  }
  pairs.reserve(refs_sorted.size());
  for (const auto& [base, reference] : refs_sorted) {
    const auto it = by_base.find(base);
    if (it == by_base.end())
      throw posdiv::ValidationError("no prediction for reference id '" + base +
                                    "'");
    pairs.push_back({reference, it->second});
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// compute / exact-match

struct ComputeOptions {
  std::string reference_path;
  std::string prediction_path;
  std::string schema_path;
  std::size_t bins = 0;
  double epsilon = 1e-6;
  std::string mode = "paired";
  std::string pairing = "id";
  bool skip_short = false;
  std::string out_path;
  bool quiet = false;
};

int run_compute(const ComputeOptions& opt) {
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus references = posdiv::load_corpus(opt.reference_path, schema);
  const posdiv::Corpus predictions = posdiv::load_corpus(opt.prediction_path, schema);

  ordered_json flags;
  flags["reference"] = opt.reference_path;
  flags["prediction"] = opt.prediction_path;
  flags["schema"] = opt.schema_path;
  flags["bins"] = opt.bins;
  flags["epsilon"] = round_sig12(opt.epsilon);
  flags["mode"] = opt.mode;
  flags["pairing"] = opt.pairing;
  flags["skip_short"] = opt.skip_short;

  ordered_json report;
  report["manifest"] = make_manifest("compute", flags);
  report["metric"] = "pdd";
  report["mode"] = opt.mode;
  report["bin_count"] = opt.bins;
  report["epsilon"] = round_sig12(opt.epsilon);

  const posdiv::SmoothingConfig smoothing{opt.epsilon};
  if (opt.mode == "set") {
    const posdiv::MetricReport result = posdiv::pdd_set(
        references.articles, predictions.articles, schema, opt.bins, smoothing,
        {opt.skip_short});
    report["value"] = round_sig12(result.value);
    report["per_bin_divergences"] = rounded_array(result.per_bin_divergences);
    report["n_references"] = result.reference_ids.size();
    report["n_predictions"] = result.prediction_ids.size();
    report["skipped"] = ordered_json{
        {"reference", {{"count", result.skipped_reference_ids.size()},
                       {"ids", result.skipped_reference_ids}}},
        {"prediction", {{"count", result.skipped_prediction_ids.size()},
                        {"ids", result.skipped_prediction_ids}}}};
  } else {
    const std::vector<ArticlePair> pairs =
        make_pairs(references, predictions, opt.pairing);
    ordered_json pair_reports = ordered_json::array();
    ordered_json skipped_ids = ordered_json::array();
    double total = 0.0;
    std::size_t evaluated = 0;
    for (const ArticlePair& pair : pairs) {
      if (opt.skip_short &&
          std::min(pair.reference->length(), pair.prediction->length()) <
              opt.bins) {
        skipped_ids.push_back(
            ordered_json{{"reference_id", pair.reference->id},
                         {"prediction_id", pair.prediction->id}});
        continue;
      }
      const posdiv::MetricReport result = posdiv::pdd_paired(
          *pair.reference, *pair.prediction, schema, opt.bins, smoothing);
      ordered_json entry;
      entry["reference_id"] = pair.reference->id;
      entry["prediction_id"] = pair.prediction->id;
      entry["value"] = round_sig12(result.value);
      entry["per_bin_divergences"] = rounded_array(result.per_bin_divergences);
      pair_reports.push_back(std::move(entry));
      total += result.value;
      ++evaluated;
    }
    if (evaluated == 0)
      throw posdiv::ValidationError(
          "no pairs left to evaluate (all skipped as too short)");
    report["pairs"] = std::move(pair_reports);
    report["n_pairs"] = evaluated;
    report["mean_value"] = round_sig12(total / static_cast<double>(evaluated));
    report["skipped"] =
        ordered_json{{"count", skipped_ids.size()}, {"ids", skipped_ids}};
  }
  write_text(report.dump(2) + "\n", opt.out_path);
  return kExitOk;
}

struct ExactMatchOptions {
  std::string reference_path;
  std::string prediction_path;
  std::string schema_path;
  std::string pairing = "id";
  std::string out_path;
  bool quiet = false;
};

int run_exact_match(const ExactMatchOptions& opt) {
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus references = posdiv::load_corpus(opt.reference_path, schema);
  const posdiv::Corpus predictions = posdiv::load_corpus(opt.prediction_path, schema);

  ordered_json flags;
  flags["reference"] = opt.reference_path;
  flags["prediction"] = opt.prediction_path;
  flags["schema"] = opt.schema_path;
  flags["pairing"] = opt.pairing;

  const std::vector<ArticlePair> pairs =
      make_pairs(references, predictions, opt.pairing);
  ordered_json pair_reports = ordered_json::array();
  double total = 0.0;
  for (const ArticlePair& pair : pairs) {
    const posdiv::MetricReport result =
        posdiv::exact_match(*pair.reference, *pair.prediction);
    pair_reports.push_back(ordered_json{{"reference_id", pair.reference->id},
                                        {"prediction_id", pair.prediction->id},
                                        {"value", round_sig12(result.value)}});
    total += result.value;
  }
  if (pairs.empty()) throw posdiv::ValidationError("no pairs to evaluate");

  ordered_json report;
  report["manifest"] = make_manifest("exact-match", flags);
  report["metric"] = "exact_match";
  report["mode"] = "paired";
  report["pairs"] = std::move(pair_reports);
  report["n_pairs"] = pairs.size();
  report["mean_value"] =
      round_sig12(total / static_cast<double>(pairs.size()));
  write_text(report.dump(2) + "\n", opt.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// perturb

struct PerturbOptions {
  std::string input_path;
  std::string schema_path;
  int variation = 1;
  std::uint64_t seed = 0;
  std::string bin_range;
  std::string out_path;
  bool quiet = false;
};

std::pair<std::uint32_t, std::uint32_t> parse_bin_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos)
    throw posdiv::InvalidArgument("bin range must look like LO..HI, got '" +
                                  text + "'");
  try {
    const unsigned long lo = std::stoul(text.substr(0, sep));
    const unsigned long hi = std::stoul(text.substr(sep + 2));
    return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)};
  } catch (const std::exception&) {
    throw posdiv::InvalidArgument("bin range must look like LO..HI, got '" +
                                  text + "'");
  }
}

int run_perturb(const PerturbOptions& opt) {
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus corpus = posdiv::load_corpus(opt.input_path, schema);

  posdiv::PerturbationSpec spec;
  spec.variation = opt.variation == 1 ? posdiv::Variation::full_shuffle
                                      : posdiv::Variation::within_bin_shuffle;
  spec.seed = opt.seed;
  if (!opt.bin_range.empty()) {
    const auto [lo, hi] = parse_bin_range(opt.bin_range);
    spec.bin_range_lo = lo;
    spec.bin_range_hi = hi;
  }
  posdiv::validate_spec(spec);

  const posdiv::Corpus perturbed = posdiv::perturb_corpus(corpus, spec);
  posdiv::write_corpus(perturbed, std::filesystem::path(opt.out_path));

  ordered_json flags;
  flags["input"] = opt.input_path;
  flags["schema"] = opt.schema_path;
  flags["variation"] = opt.variation;
  flags["seed"] = opt.seed;
  flags["bin_range"] = opt.bin_range.empty() ? "2..S" : opt.bin_range;
  flags["out"] = opt.out_path;
  ordered_json manifest = make_manifest("perturb", flags);
  manifest["n_articles"] = perturbed.articles.size();
  write_text(manifest.dump(2) + "\n", opt.out_path + ".manifest.json");
  if (!opt.quiet)
    std::cerr << "perturbed " << perturbed.articles.size() << " articles -> "
              << opt.out_path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

struct CurveOptions {
  std::string reference_path;
  std::string prediction_path;
  std::string schema_path;
  std::size_t bins_from = 1;
  std::size_t bins_to = 1;
  double epsilon = 1e-6;
  std::string mode = "paired";
  std::string pairing = "id";
  std::string out_path;
  bool quiet = false;
};

int run_curve(const CurveOptions& opt) {
  if (opt.bins_from < 1)
    throw posdiv::InvalidArgument("--bins-from must be at least 1");
  if (opt.bins_from > opt.bins_to)
    throw posdiv::InvalidArgument("--bins-from exceeds --bins-to");
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus references = posdiv::load_corpus(opt.reference_path, schema);
  const posdiv::Corpus predictions = posdiv::load_corpus(opt.prediction_path, schema);
  const posdiv::SmoothingConfig smoothing{opt.epsilon};

  std::ostringstream csv;
  csv << "bins,pdd,n_pairs_evaluated\n";
  if (opt.mode == "set") {
    for (std::size_t n = opt.bins_from; n <= opt.bins_to; ++n) {
      const auto long_enough = [n](const posdiv::LabeledArticle& a) {
        return a.length() >= n;
      };
      const std::size_t refs_ok = std::count_if(
          references.articles.begin(), references.articles.end(), long_enough);
      const std::size_t preds_ok = std::count_if(
          predictions.articles.begin(), predictions.articles.end(), long_enough);
      if (refs_ok == 0 || preds_ok == 0) {
        csv << n << ",,0\n";
        continue;
      }
      const posdiv::MetricReport result =
          posdiv::pdd_set(references.articles, predictions.articles, schema, n,
                          smoothing, {true});
      csv << n << ',' << format_sig12(result.value) << ',' << preds_ok << '\n';
    }
  } else {
    const std::vector<ArticlePair> pairs =
        make_pairs(references, predictions, opt.pairing);
    for (std::size_t n = opt.bins_from; n <= opt.bins_to; ++n) {
      double total = 0.0;
      std::size_t evaluated = 0;
      for (const ArticlePair& pair : pairs) {
        if (std::min(pair.reference->length(), pair.prediction->length()) < n)
          continue;
        total += posdiv::pdd_paired(*pair.reference, *pair.prediction, schema,
                                    n, smoothing)
                     .value;
        ++evaluated;
      }
      if (evaluated == 0)
        csv << n << ",,0\n";
      else
        csv << n << ','
            << format_sig12(total / static_cast<double>(evaluated)) << ','
            << evaluated << '\n';
    }
  }

  ordered_json flags;
  flags["reference"] = opt.reference_path;
  flags["prediction"] = opt.prediction_path;
  flags["schema"] = opt.schema_path;
  flags["bins_from"] = opt.bins_from;
  flags["bins_to"] = opt.bins_to;
  flags["epsilon"] = round_sig12(opt.epsilon);
  flags["mode"] = opt.mode;
  flags["pairing"] = opt.pairing;
  write_text(csv.str(), opt.out_path);
  emit_manifest_sidecar(make_manifest("curve", flags), opt.out_path, opt.quiet);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// distributions

struct DistributionsOptions {
  std::string input_path;
  std::string schema_path;
  std::size_t bins = 0;
  bool skip_short = false;
  std::string out_path;
  bool quiet = false;
};

int run_distributions(const DistributionsOptions& opt) {
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus corpus = posdiv::load_corpus(opt.input_path, schema);
  const posdiv::PooledDistribution pooled = posdiv::pooled_distribution(
      corpus.articles, schema, opt.bins, {opt.skip_short});

  std::ostringstream csv;
  csv << "bin,role,density,support_count\n";
  for (std::size_t n = 0; n < pooled.distribution.bin_count(); ++n) {
    for (std::size_t r = 0; r < schema.role_count(); ++r) {
      csv << n << ',' << csv_field(schema.roles()[r]) << ','
          << format_sig12(pooled.distribution.density(n, r)) << ','
          << pooled.distribution.support_count(n) << '\n';
    }
  }

  ordered_json flags;
  flags["input"] = opt.input_path;
  flags["schema"] = opt.schema_path;
  flags["bins"] = opt.bins;
  flags["skip_short"] = opt.skip_short;
  ordered_json manifest = make_manifest("distributions", flags);
  manifest["skipped"] = ordered_json{{"count", pooled.skipped_ids.size()},
                                     {"ids", pooled.skipped_ids}};
  write_text(csv.str(), opt.out_path);
  emit_manifest_sidecar(manifest, opt.out_path, opt.quiet);
  if (!opt.quiet && !pooled.skipped_ids.empty())
    std::cerr << "skipped " << pooled.skipped_ids.size()
              << " articles shorter than " << opt.bins << " sentences\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prefer

struct PreferOptions {
  std::string reference_path;
  std::string candidate1_path;
  std::string candidate2_path;
  std::string schema_path;
  std::size_t bins = 0;
  std::string metric = "pdd";
  double tie_tolerance = 0.0;
  double epsilon = 1e-6;
  std::string out_path;
  bool quiet = false;
};

int run_prefer(const PreferOptions& opt) {
  const posdiv::DiscourseSchema schema = posdiv::load_schema(opt.schema_path);
  const posdiv::Corpus references = posdiv::load_corpus(opt.reference_path, schema);
  const posdiv::Corpus candidates_1 = posdiv::load_corpus(opt.candidate1_path, schema);
  const posdiv::Corpus candidates_2 = posdiv::load_corpus(opt.candidate2_path, schema);
  const posdiv::PreferenceMetric metric = opt.metric == "pdd"
                                              ? posdiv::PreferenceMetric::pdd
                                              : posdiv::PreferenceMetric::exact_match;
  if (metric == posdiv::PreferenceMetric::pdd && opt.bins == 0)
    throw posdiv::InvalidArgument("--bins is required for the pdd metric");

  const auto index_by_base = [](const posdiv::Corpus& corpus,
                                const std::string& which) {
    std::unordered_map<std::string, const posdiv::LabeledArticle*> by_base;
    for (const auto& article : corpus.articles) {
      if (!by_base.emplace(posdiv::base_id(article.id), &article).second)
        throw posdiv::ValidationError("duplicate id '" +
                                      posdiv::base_id(article.id) + "' in " +
                                      which);
    }
    return by_base;
  };
  const auto by_base_1 = index_by_base(candidates_1, "candidate1 file");
  const auto by_base_2 = index_by_base(candidates_2, "candidate2 file");

  std::map<std::string, const posdiv::LabeledArticle*> refs_sorted;
  for (const auto& article : references.articles)
    if (!refs_sorted.emplace(posdiv::base_id(article.id), &article).second)
      throw posdiv::ValidationError("duplicate id '" +
                                    posdiv::base_id(article.id) +
                                    "' in reference file");

  const posdiv::SmoothingConfig smoothing{opt.epsilon};
  std::vector<posdiv::PreferenceLabel> labels;
  labels.reserve(refs_sorted.size());
  for (const auto& [base, reference] : refs_sorted) {
    const auto it1 = by_base_1.find(base);
    if (it1 == by_base_1.end())
      throw posdiv::ValidationError("id '" + base +
                                    "' missing in candidate1 file");
    const auto it2 = by_base_2.find(base);
    if (it2 == by_base_2.end())
      throw posdiv::ValidationError("id '" + base +
                                    "' missing in candidate2 file");
    labels.push_back(posdiv::metric_preference(*reference, *it1->second,
                                               *it2->second, schema, opt.bins,
                                               smoothing, opt.tie_tolerance,
                                               metric));
  }

  std::ostringstream body;
  posdiv::write_preference_labels(labels, body);

  ordered_json flags;
  flags["reference"] = opt.reference_path;
  flags["candidate1"] = opt.candidate1_path;
  flags["candidate2"] = opt.candidate2_path;
  flags["schema"] = opt.schema_path;
  flags["bins"] = opt.bins;
  flags["metric"] = opt.metric;
  flags["orientation"] =
      opt.metric == "pdd" ? "lower_is_preferred" : "higher_is_preferred";
  flags["tie_tolerance"] = round_sig12(opt.tie_tolerance);
  flags["epsilon"] = round_sig12(opt.epsilon);
  write_text(body.str(), opt.out_path);
  emit_manifest_sidecar(make_manifest("prefer", flags), opt.out_path,
                        opt.quiet);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// agreement

struct AgreementOptions {
  std::string labels_a_path;
  std::string labels_b_path;
  std::string out_path;
  bool quiet = false;
};

int run_agreement(const AgreementOptions& opt) {
  const std::vector<posdiv::PreferenceLabel> labels_a =
      posdiv::load_preference_labels(opt.labels_a_path);
  const std::vector<posdiv::PreferenceLabel> labels_b =
      posdiv::load_preference_labels(opt.labels_b_path);
  const posdiv::KappaReport kappa = posdiv::cohens_kappa(labels_a, labels_b);

  ordered_json flags;
  flags["labels_a"] = opt.labels_a_path;
  flags["labels_b"] = opt.labels_b_path;

  ordered_json report;
  report["manifest"] = make_manifest("agreement", flags);
  report["kappa"] = round_sig12(kappa.kappa);
  report["observed_agreement"] = round_sig12(kappa.observed_agreement);
  report["expected_agreement"] = round_sig12(kappa.expected_agreement);
  report["n_items"] = kappa.n_items;
  report["degenerate"] = kappa.degenerate;
  report["dropped"] = ordered_json{{"labels_a", kappa.n_dropped_a},
                                   {"labels_b", kappa.n_dropped_b}};
  write_text(report.dump(2) + "\n", opt.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positional discourse structure metrics for labeled corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", posdiv::kVersion);

  ComputeOptions compute_opt;
  CLI::App* compute = app.add_subcommand(
      "compute", "Positional discourse divergence between two corpora");
  compute->add_option("--reference", compute_opt.reference_path, "Reference corpus (JSONL)")->required();
  compute->add_option("--prediction", compute_opt.prediction_path, "Prediction corpus (JSONL)")->required();
  compute->add_option("--schema", compute_opt.schema_path, "Discourse schema (JSON)")->required();
  compute->add_option("--bins", compute_opt.bins, "Number of positional bins N")->required();
  compute->add_option("--epsilon", compute_opt.epsilon, "Smoothing term added inside each KL term")->capture_default_str();
  compute->add_option("--mode", compute_opt.mode, "paired: score each pair; set: compare pooled distributions")->capture_default_str()
      ->check(CLI::IsMember({"paired", "set"}));
  compute->add_option("--pairing", compute_opt.pairing, "Pair articles by id or by file order")->capture_default_str()
      ->check(CLI::IsMember({"id", "order"}));
  compute->add_flag("--skip-short", compute_opt.skip_short, "Skip articles shorter than N instead of failing");
  compute->add_option("--out", compute_opt.out_path, "Write the JSON report here instead of stdout");
  compute->add_flag("--quiet", compute_opt.quiet, "Suppress stderr notes");

  ExactMatchOptions exact_opt;
  CLI::App* exact = app.add_subcommand(
      "exact-match", "Positional exact-match baseline between two corpora");
  exact->add_option("--reference", exact_opt.reference_path, "Reference corpus (JSONL)")->required();
  exact->add_option("--prediction", exact_opt.prediction_path, "Prediction corpus (JSONL)")->required();
  exact->add_option("--schema", exact_opt.schema_path, "Discourse schema (JSON)")->required();
  exact->add_option("--pairing", exact_opt.pairing, "Pair articles by id or by file order")->capture_default_str()
      ->check(CLI::IsMember({"id", "order"}));
  exact->add_option("--out", exact_opt.out_path, "Write the JSON report here instead of stdout");
  exact->add_flag("--quiet", exact_opt.quiet, "Suppress stderr notes");

  PerturbOptions perturb_opt;
  CLI::App* perturb = app.add_subcommand(
      "perturb", "Write a seeded shuffle variation of a corpus");
  perturb->add_option("--input", perturb_opt.input_path, "Input corpus (JSONL)")->required();
  perturb->add_option("--schema", perturb_opt.schema_path, "Discourse schema (JSON)")->required();
  perturb->add_option("--variation", perturb_opt.variation, "1: full shuffle; 2: within-bin shuffle")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  perturb->add_option("--seed", perturb_opt.seed, "64-bit RNG seed")->required();
  perturb->add_option("--bin-range", perturb_opt.bin_range, "Variation-2 bin count range LO..HI (default 2..S)");
  perturb->add_option("--out", perturb_opt.out_path, "Output corpus path (manifest goes to <out>.manifest.json)")->required();
  perturb->add_flag("--quiet", perturb_opt.quiet, "Suppress stderr notes");

  CurveOptions curve_opt;
  CLI::App* curve = app.add_subcommand(
      "curve", "CSV of divergence versus bin number over a range of N");
  curve->add_option("--reference", curve_opt.reference_path, "Reference corpus (JSONL)")->required();
  curve->add_option("--prediction", curve_opt.prediction_path, "Prediction corpus (JSONL)")->required();
  curve->add_option("--schema", curve_opt.schema_path, "Discourse schema (JSON)")->required();
  curve->add_option("--bins-from", curve_opt.bins_from, "First bin count")->required();
  curve->add_option("--bins-to", curve_opt.bins_to, "Last bin count")->required();
  curve->add_option("--epsilon", curve_opt.epsilon, "Smoothing term")->capture_default_str();
  curve->add_option("--mode", curve_opt.mode, "paired or set")->capture_default_str()
      ->check(CLI::IsMember({"paired", "set"}));
  curve->add_option("--pairing", curve_opt.pairing, "id or order")->capture_default_str()
      ->check(CLI::IsMember({"id", "order"}));
  curve->add_option("--out", curve_opt.out_path, "Write CSV here instead of stdout");
  curve->add_flag("--quiet", curve_opt.quiet, "Suppress stderr notes");

  DistributionsOptions dist_opt;
  CLI::App* distributions = app.add_subcommand(
      "distributions", "CSV of pooled per-bin role densities for a corpus");
  distributions->add_option("--input", dist_opt.input_path, "Input corpus (JSONL)")->required();
  distributions->add_option("--schema", dist_opt.schema_path, "Discourse schema (JSON)")->required();
  distributions->add_option("--bins", dist_opt.bins, "Number of positional bins N")->required();
  distributions->add_flag("--skip-short", dist_opt.skip_short, "Skip articles shorter than N instead of failing");
  distributions->add_option("--out", dist_opt.out_path, "Write CSV here instead of stdout");
  distributions->add_flag("--quiet", dist_opt.quiet, "Suppress stderr notes");

  PreferOptions prefer_opt;
  CLI::App* prefer = app.add_subcommand(
      "prefer", "Metric preferences between two candidate corpora");
  prefer->add_option("--reference", prefer_opt.reference_path, "Reference corpus (JSONL)")->required();
  prefer->add_option("--candidate1", prefer_opt.candidate1_path, "First candidate corpus (JSONL)")->required();
  prefer->add_option("--candidate2", prefer_opt.candidate2_path, "Second candidate corpus (JSONL)")->required();
  prefer->add_option("--schema", prefer_opt.schema_path, "Discourse schema (JSON)")->required();
  prefer->add_option("--bins", prefer_opt.bins, "Number of positional bins N (required for pdd)");
  prefer->add_option("--metric", prefer_opt.metric, "pdd (lower preferred) or exact-match (higher preferred)")->capture_default_str()
      ->check(CLI::IsMember({"pdd", "exact-match"}));
  prefer->add_option("--tie-tolerance", prefer_opt.tie_tolerance, "Score margin treated as a tie")->capture_default_str();
  prefer->add_option("--epsilon", prefer_opt.epsilon, "Smoothing term (pdd only)")->capture_default_str();
  prefer->add_option("--out", prefer_opt.out_path, "Write preference JSONL here instead of stdout");
  prefer->add_flag("--quiet", prefer_opt.quiet, "Suppress stderr notes");

  AgreementOptions agree_opt;
  CLI::App* agreement = app.add_subcommand(
      "agreement", "Cohen's kappa between two preference label files");
  agreement->add_option("--labels-a", agree_opt.labels_a_path, "First preference JSONL")->required();
  agreement->add_option("--labels-b", agree_opt.labels_b_path, "Second preference JSONL")->required();
  agreement->add_option("--out", agree_opt.out_path, "Write the JSON report here instead of stdout");
  agreement->add_flag("--quiet", agree_opt.quiet, "Suppress stderr notes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (compute->parsed()) return run_compute(compute_opt);
    if (exact->parsed()) return run_exact_match(exact_opt);
    if (perturb->parsed()) return run_perturb(perturb_opt);
    if (curve->parsed()) return run_curve(curve_opt);
    if (distributions->parsed()) return run_distributions(dist_opt);
    if (prefer->parsed()) return run_prefer(prefer_opt);
    if (agreement->parsed()) return run_agreement(agree_opt);
    std::cerr << "error: no subcommand given\n";
    return kExitValidation;
  } catch (const posdiv::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
