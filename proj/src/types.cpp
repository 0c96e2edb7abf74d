#include "linklogic/types.hpp"

#include "linklogic/util.hpp"

namespace linklogic {

const char* to_string(EntityType type) {
  switch (type) {
    case EntityType::Person: return "Person";
    case EntityType::Location: return "Location";
    case EntityType::Institution: return "Institution";
    case EntityType::Profession: return "Profession";
    case EntityType::Ethnicity: return "Ethnicity";
    case EntityType::CauseOfDeath: return "CauseOfDeath";
    case EntityType::Religion: return "Religion";
    case EntityType::Gender: return "Gender";
    case EntityType::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<EntityType> entity_type_from_string(std::string_view name) {
  static const std::pair<std::string_view, EntityType> kNames[] = {
      {"Person", EntityType::Person},
      {"Location", EntityType::Location},
      {"Institution", EntityType::Institution},
      {"Profession", EntityType::Profession},
      {"Ethnicity", EntityType::Ethnicity},
      {"CauseOfDeath", EntityType::CauseOfDeath},
      {"Religion", EntityType::Religion},
      {"Gender", EntityType::Gender},
      {"Unknown", EntityType::Unknown},
  };
  for (const auto& [text, type] : kNames) {
    if (text == name) return type;
  }
  return std::nullopt;
}

std::uint32_t NameTable::add(std::string_view name) {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> NameTable::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

const std::string& NameTable::name(std::uint32_t id) const {
  if (id >= names_.size()) {
    throw LookupError("name table id out of range: " + std::to_string(id));
  }
  return names_[id];
}

std::uint64_t Vocabulary::name_hash() const {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const auto& name : entities_.names()) {
    hash = fnv1a(name, hash);
    hash = fnv1a("\n", hash);
  }
  for (const auto& name : relations_.names()) {
    hash = fnv1a(name, hash);
    hash = fnv1a("\n", hash);
  }
  return hash;
}

}  // namespace linklogic
