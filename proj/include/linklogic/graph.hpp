#pragma once

#include <memory>
#include <span>
#include <vector>

#include "linklogic/types.hpp"

namespace linklogic {

// Immutable triple store over a shared vocabulary. Triples are sorted and
// deduplicated at construction; adjacency is CSR over triple indexes so
// lookups never allocate. Entity types are attached once during the
// construction phase (single writer) and read-only afterwards.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  bool contains(const Triple& triple) const;

  // Triple indexes whose head (resp. tail) is the given entity.
  std::span<const std::uint32_t> outgoing(EntityId entity) const;
  std::span<const std::uint32_t> incoming(EntityId entity) const;

  std::size_t num_entities() const;
  std::size_t num_relations() const;
  const Vocabulary& vocab() const;
  const std::shared_ptr<const Vocabulary>& vocab_ptr() const { return vocab_; }

  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  void set_entity_types(std::vector<EntityType> types);
  bool has_entity_types() const { return !entity_types_.empty(); }
  const std::vector<EntityType>& entity_types() const { return entity_types_; }
  EntityType entity_type(EntityId entity) const;

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<Triple> triples_;
  std::vector<std::uint32_t> out_offsets_, out_index_;
  std::vector<std::uint32_t> in_offsets_, in_index_;
  std::vector<EntityType> entity_types_;
  std::size_t duplicates_dropped_ = 0;
};

// Train graph plus held-out triple lists. Valid/test entities are always a
// subset of the entities observable at train time (enforced by the component
// filter, relied on by evaluation).
struct DatasetSplit {
  KnowledgeGraph train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  std::uint64_t seed = 0;
};

}  // namespace linklogic
