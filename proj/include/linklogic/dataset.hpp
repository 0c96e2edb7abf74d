#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linklogic/graph.hpp"
#include "linklogic/types.hpp"

namespace linklogic {

// Resolves the standard family-KB relation ids from a vocabulary. Accepts the
// plural spellings ("parents"/"children") used by some distributions of the
// raw data; everything downstream works with whichever id resolved.
struct RelationSchema {
  std::optional<RelationId> parent, child, spouse, sibling;
  std::optional<RelationId> gender, religion, cause_of_death, ethnicity, profession, institution;
  std::optional<RelationId> location, place_of_birth, place_of_death, nationality;

  static RelationSchema resolve(const Vocabulary& vocab);

  enum class Category : std::uint8_t { Family, Location, Other };
  Category category(RelationId relation) const;
  // Inverse under graph semantics: parent<->child; spouse and sibling are
  // their own inverses. Empty for relations without a known inverse.
  std::optional<RelationId> inverse(RelationId relation) const;
};

const char* to_string(RelationSchema::Category category);

// Parses whitespace-separated "head relation tail" lines, one triple per
// line; names are interned into the vocabulary in first-seen order. Blank
// lines are skipped; any other field count is a ParseError naming the line.
std::vector<Triple> load_triples(const std::filesystem::path& path, Vocabulary& vocab);

struct SplitProportions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

// Fisher-Yates shuffle with the given seed, then largest-remainder sizing so
// the three parts always sum to the input size. Held-out lists are sorted.
DatasetSplit random_split(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples,
                          const SplitProportions& proportions, std::uint64_t seed);

struct ComponentStats {
  std::size_t components = 0;
  std::size_t kept_triples = 0;
  std::size_t dropped_triples = 0;
  std::size_t kept_entities = 0;
  std::size_t valid_dropped = 0;
  std::size_t test_dropped = 0;
};

// Keeps the weakly-connected train component with the most triples (ties:
// more entities, then smallest entity id) and drops valid/test triples whose
// endpoints fall outside it. Idempotent.
DatasetSplit filter_to_largest_component(const DatasetSplit& split, ComponentStats* stats = nullptr);

// First matching rule wins: tail of gender/religion/cause_of_death/ethnicity/
// profession/institution takes that type; tail of a location-like relation is
// Location; heads of any relation and endpoints of parent/child/spouse are
// Person; everything else Unknown. Evaluated over the given graph only, so
// pass the combined splits for dataset-wide types.
std::vector<EntityType> assign_entity_types(const KnowledgeGraph& graph,
                                            const RelationSchema& schema);

// Sibling pairs: two distinct entities, each with exactly two parent-relation
// out-edges, with equal parent sets. Emits both directions, sorted.
std::vector<Triple> infer_siblings(const KnowledgeGraph& graph, RelationId parent_relation,
                                   RelationId sibling_relation);

// Map from each entity to its sorted structural sibling list (same pairing as
// infer_siblings, keyed for lookup).
std::map<EntityId, std::vector<EntityId>> sibling_map(const KnowledgeGraph& graph,
                                                      RelationId parent_relation);

// Extends the dataset with inferred sibling triples: new vocabulary gains a
// "sibling" relation, inferred triples are split 80/10/10 with the seed and
// appended to the corresponding parts.
DatasetSplit build_fb14(const DatasetSplit& split, std::uint64_t seed,
                        std::size_t* sibling_count = nullptr);

// Union of train/valid/test as one graph (entity types not set).
KnowledgeGraph combine_splits(const DatasetSplit& split);

struct Dataset {
  std::shared_ptr<const Vocabulary> vocab;
  DatasetSplit split;
  nlohmann::json manifest;
};

// Directory layout: train.tsv / valid.tsv / test.tsv, entity_types.tsv
// (name<TAB>type), manifest.json. Loading rebuilds the vocabulary by reading
// the files in that fixed order, so ids are reproducible.
void save_dataset(const std::filesystem::path& dir, const DatasetSplit& split,
                  const nlohmann::json& manifest);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace linklogic
