#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "posdiv/corpus.hpp"
#include "posdiv/schema.hpp"

#include "generators.hpp"

namespace fs = std::filesystem;
using posdiv::Corpus;
using posdiv::DiscourseSchema;
using posdiv::LabeledArticle;

namespace {

const fs::path kDataDir = POSDIV_DATA_DIR;

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("posdiv_unit_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".tmp");
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("shipped news schema loads with the eight roles in order") {
  const DiscourseSchema schema =
      posdiv::load_schema(kDataDir / "schemas" / "news_discourse.schema.json");
  REQUIRE(schema.role_count() == 8);
  CHECK(schema.roles().front() == "Main Event");
  CHECK(schema.roles()[1] == "Consequence");
  CHECK(schema.roles().back() == "Anecdotal Event");
  CHECK(schema.index_of("Main Event") == 0);
  CHECK(schema.index_of("Anecdotal Event") == 7);
  CHECK_FALSE(schema.index_of("main event").has_value());  // case-sensitive
}

TEST_CASE("shipped recipe schema has seven roles ending in General") {
  const DiscourseSchema schema =
      posdiv::load_schema(kDataDir / "schemas" / "recipe.schema.json");
  REQUIRE(schema.role_count() == 7);
  CHECK(schema.roles().back() == "General");
}

TEST_CASE("schema validation rejects bad role sets") {
  CHECK_THROWS_AS(DiscourseSchema("dup", {"A", "A"}), posdiv::ValidationError);
  CHECK_THROWS_AS(DiscourseSchema("one", {"A"}), posdiv::ValidationError);
  CHECK_THROWS_AS(DiscourseSchema("none", {}), posdiv::ValidationError);
}

TEST_CASE("load_schema reports parse and validation failures") {
  TempFile bad_json("{not json");
  CHECK_THROWS_AS(posdiv::load_schema(bad_json.path), posdiv::ParseError);
  TempFile dup(R"({"name": "d", "roles": ["A", "A"]})");
  CHECK_THROWS_AS(posdiv::load_schema(dup.path), posdiv::ValidationError);
  CHECK_THROWS_AS(posdiv::load_schema("no/such/file.json"), posdiv::IoError);
}

TEST_CASE("role indexing is stable across repeated loads") {
  const fs::path path = kDataDir / "schemas" / "lfqa.schema.json";
  const DiscourseSchema first = posdiv::load_schema(path);
  const DiscourseSchema second = posdiv::load_schema(path);
  REQUIRE(first == second);
  for (const std::string& role : first.roles())
    CHECK(first.index_of(role) == second.index_of(role));
}

TEST_CASE("load_corpus keeps file order and validates every record") {
  const DiscourseSchema schema("ab", {"A", "B"});
  TempFile good(
      "{\"id\":\"x\",\"roles\":[\"A\",\"B\"]}\n"
      "{\"id\":\"y\",\"roles\":[\"B\"]}\n");
  const Corpus corpus = posdiv::load_corpus(good.path, schema);
  REQUIRE(corpus.articles.size() == 2);
  CHECK(corpus.articles[0].id == "x");
  CHECK(corpus.articles[1].id == "y");
}

TEST_CASE("load_corpus names the line of an unknown role") {
  const DiscourseSchema schema("ab", {"A", "B"});
  TempFile bad(
      "{\"id\":\"x\",\"roles\":[\"A\"]}\n"
      "{\"id\":\"y\",\"roles\":[\"B\"]}\n"
      "{\"id\":\"z\",\"roles\":[\"Cooking\"]}\n");
  try {
    posdiv::load_corpus(bad.path, schema);
    FAIL("expected a validation error");
  } catch (const posdiv::ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find(":3") != std::string::npos);
    CHECK(what.find("Cooking") != std::string::npos);
    CHECK(what.find("z") != std::string::npos);
  }
}

TEST_CASE("load_corpus error cases") {
  const DiscourseSchema schema("ab", {"A", "B"});
  TempFile dup_id(
      "{\"id\":\"x\",\"roles\":[\"A\"]}\n"
      "{\"id\":\"x\",\"roles\":[\"B\"]}\n");
  CHECK_THROWS_AS(posdiv::load_corpus(dup_id.path, schema),
                  posdiv::ValidationError);

  TempFile mismatch(
      "{\"id\":\"x\",\"roles\":[\"A\",\"B\"],\"sentences\":[\"only one\"]}\n");
  CHECK_THROWS_AS(posdiv::load_corpus(mismatch.path, schema),
                  posdiv::ValidationError);

  TempFile bad_json("{\"id\":\"x\",\"roles\":[\"A\"]\n");
  CHECK_THROWS_AS(posdiv::load_corpus(bad_json.path, schema),
                  posdiv::ParseError);

  TempFile unknown_field("{\"id\":\"x\",\"roles\":[\"A\"],\"extra\":1}\n");
  CHECK_THROWS_AS(posdiv::load_corpus(unknown_field.path, schema),
                  posdiv::ParseError);

  TempFile empty_roles("{\"id\":\"x\",\"roles\":[]}\n");
  CHECK_THROWS_AS(posdiv::load_corpus(empty_roles.path, schema),
                  posdiv::ValidationError);
}

TEST_CASE("an empty corpus file loads as an empty corpus") {
  const DiscourseSchema schema("ab", {"A", "B"});
  TempFile empty("");
  CHECK(posdiv::load_corpus(empty.path, schema).articles.empty());
}

TEST_CASE("write then load is the identity on random corpora") {
  std::mt19937_64 engine(20240901);
  const DiscourseSchema schema = testgen::make_schema(6);
  for (int round = 0; round < 25; ++round) {
    Corpus corpus{schema, {}};
    const std::size_t n_articles = 1 + posdiv::rng::bounded(engine, 6);
    for (std::size_t k = 0; k < n_articles; ++k) {
      LabeledArticle article = testgen::random_article(
          engine, schema, 1 + posdiv::rng::bounded(engine, 12),
          "id-" + std::to_string(round) + "-" + std::to_string(k));
      if (posdiv::rng::bounded(engine, 2) == 0) {
        std::vector<std::string> sentences;
        for (std::size_t i = 0; i < article.roles.size(); ++i)
          sentences.push_back("sentence " + std::to_string(i) + ".");
        article.sentences = std::move(sentences);
      }
      if (posdiv::rng::bounded(engine, 3) == 0)
        article.meta = {{"source", "generator"},
                        {"round", round},
                        {"weight", 0.25}};
      corpus.articles.push_back(std::move(article));
    }

    TempFile sink("");
    posdiv::write_corpus(corpus, sink.path);
    const Corpus reloaded = posdiv::load_corpus(sink.path, schema);
    REQUIRE(reloaded == corpus);
  }
}

TEST_CASE("records without sentences stay without sentences on disk") {
  const DiscourseSchema schema("ab", {"A", "B"});
  Corpus corpus{schema, {LabeledArticle{"x", {"A", "B"}, {}, {}}}};
  TempFile sink("");
  posdiv::write_corpus(corpus, sink.path);
  std::ifstream in(sink.path);
  std::string line;
  std::getline(in, line);
  CHECK(line.find("sentences") == std::string::npos);
  CHECK(line.find("meta") == std::string::npos);
}

TEST_CASE("shipped fixture corpora load against their schemas") {
  const struct {
    const char* schema;
    const char* fixture;
  } cases[] = {
      {"news_discourse.schema.json", "news_sample.jsonl"},
      {"lfqa.schema.json", "lfqa_sample.jsonl"},
      {"recipe.schema.json", "recipe_sample.jsonl"},
  };
  for (const auto& c : cases) {
    const DiscourseSchema schema =
        posdiv::load_schema(kDataDir / "schemas" / c.schema);
    const Corpus corpus =
        posdiv::load_corpus(kDataDir / "fixtures" / c.fixture, schema);
    CHECK(corpus.articles.size() >= 6);
    for (const LabeledArticle& a : corpus.articles) CHECK(a.length() >= 4);
  }
}
