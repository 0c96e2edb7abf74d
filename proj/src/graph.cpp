#include "linklogic/graph.hpp"

#include <algorithm>

namespace linklogic {

namespace {

// CSR over triple indexes keyed by entity; key(t) picks head or tail.
template <typename Key>
void build_csr(const std::vector<Triple>& triples, std::size_t n_entities, Key key,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& index) {
  offsets.assign(n_entities + 1, 0);
  for (const Triple& t : triples) {
    ++offsets[key(t) + 1];
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    offsets[i] += offsets[i - 1];
  }
  index.resize(triples.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t i = 0; i < triples.size(); ++i) {
    index[cursor[key(triples[i])]++] = i;
  }
}

}  // namespace

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples)
    : vocab_(std::move(vocab)), triples_(std::move(triples)) {
  if (!vocab_) {
    throw LookupError("knowledge graph requires a vocabulary");
  }
  const auto n_entities = vocab_->entities().size();
  const auto n_relations = vocab_->relations().size();
  for (const Triple& t : triples_) {
    if (t.head >= n_entities || t.tail >= n_entities || t.relation >= n_relations) {
      throw LookupError("triple references id outside the vocabulary");
    }
  }
  std::sort(triples_.begin(), triples_.end());
  const auto unique_end = std::unique(triples_.begin(), triples_.end());
  duplicates_dropped_ = static_cast<std::size_t>(triples_.end() - unique_end);
  triples_.erase(unique_end, triples_.end());

  build_csr(triples_, n_entities, [](const Triple& t) { return t.head; }, out_offsets_, out_index_);
  build_csr(triples_, n_entities, [](const Triple& t) { return t.tail; }, in_offsets_, in_index_);
}

bool KnowledgeGraph::contains(const Triple& triple) const {
  return std::binary_search(triples_.begin(), triples_.end(), triple);
}

std::span<const std::uint32_t> KnowledgeGraph::outgoing(EntityId entity) const {
  if (entity + 1 >= out_offsets_.size()) {
    throw LookupError("entity id out of range: " + std::to_string(entity));
  }
  return {out_index_.data() + out_offsets_[entity],
          out_index_.data() + out_offsets_[entity + 1]};
}

std::span<const std::uint32_t> KnowledgeGraph::incoming(EntityId entity) const {
  if (entity + 1 >= in_offsets_.size()) {
    throw LookupError("entity id out of range: " + std::to_string(entity));
  }
  return {in_index_.data() + in_offsets_[entity], in_index_.data() + in_offsets_[entity + 1]};
}

std::size_t KnowledgeGraph::num_entities() const {
  return vocab_ ? vocab_->entities().size() : 0;
}

std::size_t KnowledgeGraph::num_relations() const {
  return vocab_ ? vocab_->relations().size() : 0;
}

const Vocabulary& KnowledgeGraph::vocab() const {
  if (!vocab_) {
    throw LookupError("knowledge graph has no vocabulary");
  }
  return *vocab_;
}

void KnowledgeGraph::set_entity_types(std::vector<EntityType> types) {
  if (types.size() != num_entities()) {
    throw LookupError("entity type vector size does not match entity count");
  }
  entity_types_ = std::move(types);
}

EntityType KnowledgeGraph::entity_type(EntityId entity) const {
  if (entity >= entity_types_.size()) {
    throw LookupError("entity id out of range for entity types: " + std::to_string(entity));
  }
  return entity_types_[entity];
}

}  // namespace linklogic
