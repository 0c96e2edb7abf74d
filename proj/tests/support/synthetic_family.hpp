#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "linklogic/dataset.hpp"
#include "linklogic/graph.hpp"
#include "linklogic/types.hpp"

namespace linklogic::testing {

// Deterministic family corpus: family f has two spoused parents and (f mod 6)
// children, so children with 1 to 4 siblings all occur in bulk. Every person
// gets a location and profession edge; child/parent edges appear in both
// orientations like the real data.
struct FamilyFixtureOptions {
  std::size_t n_families = 60;
  bool with_siblings = false;  // emit sibling edges for same-family children
  std::size_t n_locations = 10;
  std::size_t n_professions = 8;
};

struct FamilyFixture {
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<Triple> triples;
  RelationId parent = kInvalidId;
  RelationId child = kInvalidId;
  RelationId spouse = kInvalidId;
  RelationId location = kInvalidId;
  RelationId profession = kInvalidId;
  std::optional<RelationId> sibling;

  std::vector<EntityId> parents_a, parents_b;      // indexed by family
  std::vector<std::vector<EntityId>> children;     // indexed by family
};

FamilyFixture make_family_fixture(const FamilyFixtureOptions& options = {});

// The whole fixture as a train-only split with entity types assigned.
DatasetSplit fixture_split(const FamilyFixture& fixture);

// The whole fixture as one typed graph.
KnowledgeGraph fixture_graph(const FamilyFixture& fixture);

}  // namespace linklogic::testing
