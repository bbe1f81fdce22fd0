#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "posdiv/errors.hpp"

namespace posdiv {

// Closed, ordered set of discourse roles for one domain. Role order fixes
// the axis order of every distribution vector derived from the schema, so
// repeated loads of the same file index roles identically.
class DiscourseSchema {
 public:
  DiscourseSchema(std::string name, std::vector<std::string> roles)
      : name_(std::move(name)), roles_(std::move(roles)) {
    if (roles_.empty())
      throw ValidationError("schema '" + name_ + "': role list is empty");
    if (roles_.size() < 2)
      throw ValidationError("schema '" + name_ +
                            "': needs at least 2 roles, got " +
                            std::to_string(roles_.size()));
    for (std::size_t i = 0; i < roles_.size(); ++i) {
      const auto [it, inserted] = index_.emplace(roles_[i], i);
      if (!inserted)
        throw ValidationError("schema '" + name_ + "': duplicate role '" +
                              roles_[i] + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& roles() const noexcept { return roles_; }
  std::size_t role_count() const noexcept { return roles_.size(); }

  // Exact, case-sensitive match; normalization is the annotator's job.
  std::optional<std::size_t> index_of(const std::string& role) const {
    const auto it = index_.find(role);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const DiscourseSchema& a, const DiscourseSchema& b) {
    return a.name_ == b.name_ && a.roles_ == b.roles_;
  }

 private:
  std::string name_;
  std::vector<std::string> roles_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Schema file format: {"name": string, "roles": [string, ...]}.
inline DiscourseSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object())
    throw ParseError(path.string() + ": schema file must hold a JSON object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw ParseError(path.string() + ": missing string field 'name'");
  if (!doc.contains("roles") || !doc["roles"].is_array())
    throw ParseError(path.string() + ": missing array field 'roles'");
  std::vector<std::string> roles;
  roles.reserve(doc["roles"].size());
  for (const auto& role : doc["roles"]) {
    if (!role.is_string())
      throw ParseError(path.string() + ": every role must be a string");
    roles.push_back(role.get<std::string>());
  }
  try {
    return DiscourseSchema(doc["name"].get<std::string>(), std::move(roles));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace posdiv
