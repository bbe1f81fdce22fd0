#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "posdiv/agreement.hpp"

#include "generators.hpp"

using posdiv::DiscourseSchema;
using posdiv::KappaReport;
using posdiv::LabeledArticle;
using posdiv::Preference;
using posdiv::PreferenceLabel;

namespace {

LabeledArticle article_of(std::string id, std::vector<std::string> roles) {
  return LabeledArticle{std::move(id), std::move(roles), {}, {}};
}

std::vector<PreferenceLabel> labels_of(const std::vector<Preference>& prefs) {
  std::vector<PreferenceLabel> labels;
  for (std::size_t i = 0; i < prefs.size(); ++i)
    labels.push_back({"item-" + std::to_string(i), prefs[i]});
  return labels;
}

constexpr Preference P1 = Preference::prefer_1;
constexpr Preference P2 = Preference::prefer_2;
constexpr Preference TIE = Preference::tie;

}  // namespace

TEST_CASE("metric_preference picks the structurally closer candidate") {
  const DiscourseSchema schema("ab", {"A", "B"});
  const LabeledArticle ref = article_of("ref", {"A", "A", "B", "B"});

  SECTION("the reference itself wins against an inverted candidate") {
    const LabeledArticle inverted = article_of("c2", {"B", "B", "A", "A"});
    const PreferenceLabel label =
        posdiv::metric_preference(ref, ref, inverted, schema, 2);
    CHECK(label.preference == P1);
    CHECK(label.item_id == "ref");
  }

  SECTION("identical candidates tie at zero tolerance") {
    const LabeledArticle c = article_of("c", {"A", "B", "A", "B"});
    CHECK(posdiv::metric_preference(ref, c, c, schema, 2).preference == TIE);
  }

  SECTION("bin-preserving beats bin-inverting") {
    const LabeledArticle within = article_of("c1", {"A", "B", "A", "B"});
    const LabeledArticle inverted = article_of("c2", {"B", "B", "A", "A"});
    CHECK(posdiv::metric_preference(ref, within, inverted, schema, 2)
              .preference == P1);
  }

  SECTION("a large tie tolerance flattens everything to tie") {
    const LabeledArticle inverted = article_of("c2", {"B", "B", "A", "A"});
    CHECK(posdiv::metric_preference(ref, ref, inverted, schema, 2, {}, 100.0)
              .preference == TIE);
  }

  SECTION("negative tolerance is rejected") {
    CHECK_THROWS_AS(
        posdiv::metric_preference(ref, ref, ref, schema, 2, {}, -0.5),
        posdiv::InvalidArgument);
  }
}

TEST_CASE("metric_preference supports the exact-match orientation") {
  const DiscourseSchema schema("ab", {"A", "B"});
  const LabeledArticle ref = article_of("ref", {"A", "A", "B", "B"});
  const LabeledArticle close = article_of("c1", {"A", "A", "B", "A"});
  const LabeledArticle far = article_of("c2", {"B", "B", "A", "A"});
  // higher exact match is preferred
  const PreferenceLabel label = posdiv::metric_preference(
      ref, close, far, schema, 1, {}, 0.0, posdiv::PreferenceMetric::exact_match);
  CHECK(label.preference == P1);
}

TEST_CASE("metric_preference uses the base id of tagged references") {
  const DiscourseSchema schema("ab", {"A", "B"});
  const LabeledArticle ref = article_of("ref#v1", {"A", "B"});
  CHECK(posdiv::metric_preference(ref, ref, ref, schema, 1).item_id == "ref");
}

TEST_CASE("swapping candidates swaps the preference") {
  std::mt19937_64 engine(66001);
  const DiscourseSchema schema = testgen::make_schema(4);
  for (int round = 0; round < 80; ++round) {
    const std::size_t length = 3 + posdiv::rng::bounded(engine, 15);
    const LabeledArticle ref =
        testgen::random_article(engine, schema, length, "r");
    const LabeledArticle c1 =
        testgen::random_article(engine, schema, length, "c1");
    const LabeledArticle c2 =
        testgen::random_article(engine, schema, length, "c2");
    const std::size_t bins = 1 + posdiv::rng::bounded(engine, length);

    const Preference forward =
        posdiv::metric_preference(ref, c1, c2, schema, bins).preference;
    const Preference swapped =
        posdiv::metric_preference(ref, c2, c1, schema, bins).preference;
    if (forward == P1) CHECK(swapped == P2);
    if (forward == P2) CHECK(swapped == P1);
    if (forward == TIE) CHECK(swapped == TIE);
  }
}

TEST_CASE("cohens_kappa hand-derived fixtures") {
  SECTION("identical lists agree perfectly") {
    const auto labels = labels_of({P1, P2, TIE, P1, P2});
    const KappaReport report = posdiv::cohens_kappa(labels, labels);
    CHECK(report.kappa == 1.0);
    CHECK(report.observed_agreement == 1.0);
    CHECK_FALSE(report.degenerate);
    CHECK(report.n_items == 5);
  }

  SECTION("half agreement with matched marginals gives zero") {
    const auto a = labels_of({P1, P1, P2, P2});
    const auto b = labels_of({P1, P2, P1, P2});
    const KappaReport report = posdiv::cohens_kappa(a, b);
    CHECK(report.observed_agreement == 0.5);
    CHECK(report.expected_agreement == 0.5);
    CHECK(report.kappa == 0.0);
  }

  SECTION("systematic disagreement gives minus one") {
    const auto a = labels_of({P1, P1, P2, P2});
    const auto b = labels_of({P2, P2, P1, P1});
    const KappaReport report = posdiv::cohens_kappa(a, b);
    CHECK(report.observed_agreement == 0.0);
    CHECK(report.expected_agreement == 0.5);
    CHECK(report.kappa == -1.0);
  }
}

TEST_CASE("kappa is symmetric and bounded on random labels") {
  std::mt19937_64 engine(66002);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + posdiv::rng::bounded(engine, 30);
    std::vector<Preference> prefs_a, prefs_b;
    for (std::size_t i = 0; i < n; ++i) {
      prefs_a.push_back(static_cast<Preference>(posdiv::rng::bounded(engine, 3)));
      prefs_b.push_back(static_cast<Preference>(posdiv::rng::bounded(engine, 3)));
    }
    const auto a = labels_of(prefs_a);
    const auto b = labels_of(prefs_b);
    const KappaReport forward = posdiv::cohens_kappa(a, b);
    const KappaReport backward = posdiv::cohens_kappa(b, a);
    CHECK(forward.kappa == backward.kappa);
    CHECK(forward.observed_agreement == backward.observed_agreement);
    CHECK(forward.expected_agreement == backward.expected_agreement);
    CHECK(forward.kappa >= -1.0 - 1e-12);
    CHECK(forward.kappa <= 1.0 + 1e-12);
  }
}

TEST_CASE("kappa(x, x) is one whenever expected agreement is below one") {
  std::mt19937_64 engine(66003);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 2 + posdiv::rng::bounded(engine, 20);
    std::vector<Preference> prefs;
    for (std::size_t i = 0; i < n; ++i)
      prefs.push_back(static_cast<Preference>(posdiv::rng::bounded(engine, 3)));
    const auto labels = labels_of(prefs);
    const KappaReport report = posdiv::cohens_kappa(labels, labels);
    CHECK(report.kappa == 1.0);
  }
}

TEST_CASE("degenerate marginals are reported, not NaN") {
  const auto a = labels_of({P1, P1, P1});
  const KappaReport report = posdiv::cohens_kappa(a, a);
  CHECK(report.degenerate);
  CHECK(report.kappa == 1.0);
  CHECK(report.expected_agreement == 1.0);
}

TEST_CASE("join drops unmatched items and counts them") {
  std::vector<PreferenceLabel> a = {
      {"x", P1}, {"y", P2}, {"only-a", TIE}};
  std::vector<PreferenceLabel> b = {
      {"x", P1}, {"y", P2}, {"only-b-1", P1}, {"only-b-2", P2}};
  const KappaReport report = posdiv::cohens_kappa(a, b);
  CHECK(report.n_items == 2);
  CHECK(report.n_dropped_a == 1);
  CHECK(report.n_dropped_b == 2);
  CHECK(report.kappa == 1.0);
}

TEST_CASE("kappa input validation") {
  const std::vector<PreferenceLabel> empty;
  const std::vector<PreferenceLabel> some = {{"x", P1}, {"y", P2}};
  CHECK_THROWS_AS(posdiv::cohens_kappa(empty, some), posdiv::ValidationError);
  CHECK_THROWS_AS(posdiv::cohens_kappa(some, empty), posdiv::ValidationError);

  const std::vector<PreferenceLabel> disjoint = {{"z", P1}};
  CHECK_THROWS_AS(posdiv::cohens_kappa(some, disjoint),
                  posdiv::ValidationError);

  const std::vector<PreferenceLabel> dup = {{"x", P1}, {"x", P2}};
  CHECK_THROWS_AS(posdiv::cohens_kappa(dup, some), posdiv::ValidationError);
}

TEST_CASE("preference labels round-trip through JSONL") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() /
                        ("posdiv_labels_" + std::to_string(::getpid()) + ".jsonl");
  const std::vector<PreferenceLabel> labels = {
      {"a", P1}, {"b", P2}, {"c", TIE}};
  posdiv::write_preference_labels(labels, path);
  CHECK(posdiv::load_preference_labels(path) == labels);

  std::ofstream(path) << "{\"item_id\":\"a\",\"preference\":\"maybe\"}\n";
  CHECK_THROWS_AS(posdiv::load_preference_labels(path), posdiv::ParseError);
  fs::remove(path);
}

TEST_CASE("preference codes parse both ways") {
  CHECK(posdiv::parse_preference("1") == P1);
  CHECK(posdiv::parse_preference("2") == P2);
  CHECK(posdiv::parse_preference("tie") == TIE);
  CHECK_THROWS_AS(posdiv::parse_preference("prefer_1"), posdiv::ParseError);
  CHECK(std::string(posdiv::preference_code(P1)) == "1");
  CHECK(std::string(posdiv::preference_code(TIE)) == "tie");
}
