#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "posdiv/errors.hpp"
#include "posdiv/schema.hpp"

namespace posdiv {

// One article as an ordered sequence of per-sentence discourse role labels.
// `sentences`, when present, runs parallel to `roles`; `meta` is carried
// through I/O untouched (null when absent).
struct LabeledArticle {
  std::string id;
  std::vector<std::string> roles;
  std::optional<std::vector<std::string>> sentences;
  nlohmann::ordered_json meta;

  std::size_t length() const noexcept { return roles.size(); }

  friend bool operator==(const LabeledArticle&, const LabeledArticle&) = default;
};

struct Corpus {
  DiscourseSchema schema;
  std::vector<LabeledArticle> articles;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline void validate_article(const LabeledArticle& article,
                             const DiscourseSchema& schema) {
  if (article.roles.empty())
    throw ValidationError("article '" + article.id + "': empty role sequence");
  for (std::size_t i = 0; i < article.roles.size(); ++i) {
    if (!schema.index_of(article.roles[i]))
      throw ValidationError("article '" + article.id + "': unknown role '" +
                            article.roles[i] + "' at position " +
                            std::to_string(i));
  }
  if (article.sentences && article.sentences->size() != article.roles.size())
    throw ValidationError(
        "article '" + article.id + "': " +
        std::to_string(article.sentences->size()) + " sentences vs " +
        std::to_string(article.roles.size()) + " roles");
  if (!article.meta.is_null() && !article.meta.is_object())
    throw ValidationError("article '" + article.id +
                          "': meta must be a JSON object");
}

namespace detail {

inline LabeledArticle parse_article_record(const nlohmann::ordered_json& rec,
                                           const std::string& where) {
  if (!rec.is_object()) throw ParseError(where + ": record is not an object");
  for (const auto& item : rec.items()) {
    const std::string& key = item.key();
    if (key != "id" && key != "roles" && key != "sentences" && key != "meta")
      throw ParseError(where + ": unknown field '" + key + "'");
  }
  if (!rec.contains("id") || !rec["id"].is_string())
    throw ParseError(where + ": missing string field 'id'");
  if (!rec.contains("roles") || !rec["roles"].is_array())
    throw ParseError(where + ": missing array field 'roles'");

  LabeledArticle article;
  article.id = rec["id"].get<std::string>();
  article.roles.reserve(rec["roles"].size());
  for (const auto& role : rec["roles"]) {
    if (!role.is_string())
      throw ParseError(where + ": every role must be a string");
    article.roles.push_back(role.get<std::string>());
  }
  if (rec.contains("sentences")) {
    if (!rec["sentences"].is_array())
      throw ParseError(where + ": 'sentences' must be an array");
    std::vector<std::string> sentences;
    sentences.reserve(rec["sentences"].size());
    for (const auto& sentence : rec["sentences"]) {
      if (!sentence.is_string())
        throw ParseError(where + ": every sentence must be a string");
      sentences.push_back(sentence.get<std::string>());
    }
    article.sentences = std::move(sentences);
  }
  if (rec.contains("meta")) article.meta = rec["meta"];
  return article;
}

}  // namespace detail

// Corpus file format: JSON Lines, one article object per line:
//   {"id": string, "roles": [string, ...], "sentences": [string, ...]?,
//    "meta": object?}
// Blank lines are skipped. Any invalid record aborts the load with the
// offending line number; no partially valid corpus is returned. An empty
// file yields an empty corpus.
inline Corpus load_corpus(const std::filesystem::path& path,
                          const DiscourseSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());

  Corpus corpus{schema, {}};
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_number);
    nlohmann::ordered_json rec;
    try {
      rec = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    LabeledArticle article = detail::parse_article_record(rec, where);
    try {
      validate_article(article, schema);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!seen_ids.insert(article.id).second)
      throw ValidationError(where + ": duplicate article id '" + article.id +
                            "'");
    corpus.articles.push_back(std::move(article));
  }
  return corpus;
}

inline void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const LabeledArticle& article : corpus.articles) {
    nlohmann::ordered_json rec;
    rec["id"] = article.id;
    rec["roles"] = article.roles;
    if (article.sentences) rec["sentences"] = *article.sentences;
    if (!article.meta.is_null()) rec["meta"] = article.meta;
    out << rec.dump() << '\n';
  }
}

// JSONL output; load_corpus(write_corpus(c)) reproduces c exactly.
inline void write_corpus(const Corpus& corpus,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path.string());
  write_corpus(corpus, out);
  out.flush();
  if (!out) throw IoError("failed writing corpus to " + path.string());
}

}  // namespace posdiv
