#include "synthetic_family.hpp"

#include <string>

namespace linklogic::testing {

FamilyFixture make_family_fixture(const FamilyFixtureOptions& options) {
  auto vocab = std::make_shared<Vocabulary>();
  FamilyFixture fixture;

  fixture.parent = vocab->relations().add("parent");
  fixture.child = vocab->relations().add("child");
  fixture.spouse = vocab->relations().add("spouse");
  fixture.location = vocab->relations().add("location");
  fixture.profession = vocab->relations().add("profession");
  if (options.with_siblings) {
    fixture.sibling = vocab->relations().add("sibling");
  }

  std::vector<EntityId> locations, professions;
  for (std::size_t i = 0; i < options.n_locations; ++i) {
    locations.push_back(vocab->entities().add("city_" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < options.n_professions; ++i) {
    professions.push_back(vocab->entities().add("job_" + std::to_string(i)));
  }

  std::size_t person_index = 0;
  const auto add_person = [&](const std::string& name) {
    const EntityId id = vocab->entities().add(name);
    fixture.triples.push_back({id, fixture.location, locations[(person_index * 7 + 3) % locations.size()]});
    fixture.triples.push_back(
        {id, fixture.profession, professions[(person_index * 5 + 1) % professions.size()]});
    ++person_index;
    return id;
  };

  for (std::size_t f = 0; f < options.n_families; ++f) {
    const std::string tag = std::to_string(f);
    const EntityId a = add_person("p" + tag + "_a");
    const EntityId b = add_person("p" + tag + "_b");
    fixture.parents_a.push_back(a);
    fixture.parents_b.push_back(b);
    fixture.triples.push_back({a, fixture.spouse, b});
    fixture.triples.push_back({b, fixture.spouse, a});

    std::vector<EntityId> kids;
    const std::size_t n_children = f % 6;
    for (std::size_t j = 0; j < n_children; ++j) {
      const EntityId c = add_person("c" + tag + "_" + std::to_string(j));
      fixture.triples.push_back({c, fixture.parent, a});
      fixture.triples.push_back({c, fixture.parent, b});
      fixture.triples.push_back({a, fixture.child, c});
      fixture.triples.push_back({b, fixture.child, c});
      kids.push_back(c);
    }
    if (fixture.sibling) {
      for (const EntityId x : kids) {
        for (const EntityId y : kids) {
          if (x != y) fixture.triples.push_back({x, *fixture.sibling, y});
        }
      }
    }
    fixture.children.push_back(std::move(kids));
  }

  fixture.vocab = vocab;
  return fixture;
}

DatasetSplit fixture_split(const FamilyFixture& fixture) {
  DatasetSplit split;
  split.train = fixture_graph(fixture);
  return split;
}

KnowledgeGraph fixture_graph(const FamilyFixture& fixture) {
  KnowledgeGraph graph(fixture.vocab, fixture.triples);
  const auto schema = RelationSchema::resolve(*fixture.vocab);
  graph.set_entity_types(assign_entity_types(graph, schema));
  return graph;
}

}  // namespace linklogic::testing
