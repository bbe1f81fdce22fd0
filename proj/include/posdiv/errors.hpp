#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posdiv {

// Base for all input and validation failures. The CLI maps these to exit
// code 2; any other exception escaping a command is an internal error (1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Requested bin count exceeds an article's sentence count.
class BinCountExceedsLength : public ValidationError {
 public:
  BinCountExceedsLength(std::string article_id, std::size_t article_length,
                        std::size_t bin_count)
      : ValidationError(format(article_id, article_length, bin_count)),
        article_id_(std::move(article_id)),
        article_length_(article_length),
        bin_count_(bin_count) {}

  const std::string& article_id() const noexcept { return article_id_; }
  std::size_t article_length() const noexcept { return article_length_; }
  std::size_t bin_count() const noexcept { return bin_count_; }

 private:
  static std::string format(const std::string& id, std::size_t length,
                            std::size_t bins) {
    const std::string where =
        id.empty() ? std::string("article") : "article '" + id + "'";
    return "bin count " + std::to_string(bins) + " exceeds the " +
           std::to_string(length) + " sentences of " + where;
  }

  std::string article_id_;
  std::size_t article_length_;
  std::size_t bin_count_;
};

}  // namespace posdiv
