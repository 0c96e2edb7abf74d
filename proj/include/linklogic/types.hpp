#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace linklogic {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

inline constexpr std::uint32_t kInvalidId = 0xffffffffu;

struct Triple {
  EntityId head = kInvalidId;
  RelationId relation = kInvalidId;
  EntityId tail = kInvalidId;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Errors are grouped by how the CLI reports them: bad input data (ParseError,
// LookupError -> exit 2), bad configuration (ConfigError -> exit 3), anything
// else (IoError, NumericError, TrainingError -> exit 1).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct LookupError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct TrainingError : Error {
  using Error::Error;
};

enum class EntityType : std::uint8_t {
  Person,
  Location,
  Institution,
  Profession,
  Ethnicity,
  CauseOfDeath,
  Religion,
  Gender,
  Unknown,
};

const char* to_string(EntityType type);
std::optional<EntityType> entity_type_from_string(std::string_view name);

// Bijection between names and dense ids. Ids are assigned in first-seen order
// so a fixed read order reproduces the same id assignment.
class NameTable {
 public:
  std::uint32_t add(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  // Throws LookupError if the id is out of range.
  const std::string& name(std::uint32_t id) const;
  std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

class Vocabulary {
 public:
  NameTable& entities() { return entities_; }
  const NameTable& entities() const { return entities_; }
  NameTable& relations() { return relations_; }
  const NameTable& relations() const { return relations_; }

  const std::string& entity_name(EntityId id) const { return entities_.name(id); }
  const std::string& relation_name(RelationId id) const { return relations_.name(id); }

  // FNV-1a over all entity names then all relation names, each terminated by
  // '\n'. Stored in embedding sidecars to detect name-table drift.
  std::uint64_t name_hash() const;

 private:
  NameTable entities_;
  NameTable relations_;
};

}  // namespace linklogic
