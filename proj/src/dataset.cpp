#include "linklogic/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "linklogic/rng.hpp"
#include "linklogic/util.hpp"

namespace linklogic {

RelationSchema RelationSchema::resolve(const Vocabulary& vocab) {
  const auto& rel = vocab.relations();
  const auto pick = [&rel](std::initializer_list<std::string_view> names) {
    std::optional<RelationId> id;
    for (const auto name : names) {
      if (auto found = rel.find(name)) {
        id = *found;
        break;
      }
    }
    return id;
  };
  RelationSchema schema;
  schema.parent = pick({"parent", "parents"});
  schema.child = pick({"child", "children"});
  schema.spouse = pick({"spouse"});
  schema.sibling = pick({"sibling"});
  schema.gender = pick({"gender"});
  schema.religion = pick({"religion"});
  schema.cause_of_death = pick({"cause_of_death"});
  schema.ethnicity = pick({"ethnicity"});
  schema.profession = pick({"profession"});
  schema.institution = pick({"institution"});
  schema.location = pick({"location"});
  schema.place_of_birth = pick({"place_of_birth"});
  schema.place_of_death = pick({"place_of_death"});
  schema.nationality = pick({"nationality"});
  return schema;
}

RelationSchema::Category RelationSchema::category(RelationId relation) const {
  const auto is = [relation](const std::optional<RelationId>& id) {
    return id && *id == relation;
  };
  if (is(parent) || is(child) || is(spouse) || is(sibling)) return Category::Family;
  if (is(location) || is(place_of_birth) || is(place_of_death) || is(nationality)) {
    return Category::Location;
  }
  return Category::Other;
}

std::optional<RelationId> RelationSchema::inverse(RelationId relation) const {
  if (parent && *parent == relation) return child;
  if (child && *child == relation) return parent;
  if (spouse && *spouse == relation) return spouse;
  if (sibling && *sibling == relation) return sibling;
  return std::nullopt;
}

const char* to_string(RelationSchema::Category category) {
  switch (category) {
    case RelationSchema::Category::Family: return "Family";
    case RelationSchema::Category::Location: return "Location";
    case RelationSchema::Category::Other: return "Other";
  }
  return "Other";
}

std::vector<Triple> load_triples(const std::filesystem::path& path, Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open triple file: " + path.string());
  }
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string head, relation, tail, extra;
    if (!(fields >> head)) continue;  // blank line
    if (!(fields >> relation >> tail) || (fields >> extra)) {
      throw ParseError(path.string() + ":" + std::to_string(line_number) +
                       ": expected 3 whitespace-separated fields");
    }
    triples.push_back(Triple{vocab.entities().add(head), vocab.relations().add(relation),
                             vocab.entities().add(tail)});
  }
  if (in.bad()) {
    throw IoError("read failure on triple file: " + path.string());
  }
  return triples;
}

namespace {

// Largest-remainder apportionment: sizes sum to total exactly, ties go to the
// earlier part.
std::array<std::size_t, 3> apportion(std::size_t total, const SplitProportions& p) {
  const double props[3] = {p.train, p.valid, p.test};
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(total) * props[i];
    sizes[i] = static_cast<std::size_t>(exact);
    remainders[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t leftover = total - assigned, i = 0; leftover > 0; --leftover, ++i) {
    ++sizes[order[i % 3]];
  }
  return sizes;
}

void check_proportions(const SplitProportions& p) {
  if (p.train <= 0.0 || p.valid < 0.0 || p.test < 0.0) {
    throw ConfigError("split proportions must be positive (train) and non-negative");
  }
  const double sum = p.train + p.valid + p.test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split proportions must sum to 1, got " + format_double(sum));
  }
}

}  // namespace

DatasetSplit random_split(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples,
                          const SplitProportions& proportions, std::uint64_t seed) {
  check_proportions(proportions);
  // Dedup before shuffling: a duplicate landing in two splits would break
  // their disjointness, and sorting first makes the split a function of the
  // triple multiset rather than input order.
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  Rng rng(seed);
  rng.shuffle(triples);
  const auto sizes = apportion(triples.size(), proportions);
  DatasetSplit split;
  split.seed = seed;
  std::vector<Triple> train(triples.begin(), triples.begin() + sizes[0]);
  split.valid.assign(triples.begin() + sizes[0], triples.begin() + sizes[0] + sizes[1]);
  split.test.assign(triples.begin() + sizes[0] + sizes[1], triples.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  split.train = KnowledgeGraph(std::move(vocab), std::move(train));
  return split;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

DatasetSplit filter_to_largest_component(const DatasetSplit& split, ComponentStats* stats) {
  const auto& train = split.train.triples();
  const std::size_t n_entities = split.train.num_entities();
  UnionFind uf(n_entities);
  for (const Triple& t : train) {
    uf.unite(t.head, t.tail);
  }

  // Component statistics keyed by root; only entities that occur in train
  // triples count as component members.
  std::vector<std::size_t> triple_count(n_entities, 0);
  std::vector<std::size_t> entity_count(n_entities, 0);
  std::vector<bool> seen(n_entities, false);
  for (const Triple& t : train) {
    ++triple_count[uf.find(t.head)];
    for (const EntityId e : {t.head, t.tail}) {
      if (!seen[e]) {
        seen[e] = true;
        ++entity_count[uf.find(e)];
      }
    }
  }

  std::uint32_t best = kInvalidId;
  std::size_t n_components = 0;
  for (std::uint32_t root = 0; root < n_entities; ++root) {
    if (entity_count[root] == 0) continue;
    ++n_components;
    if (best == kInvalidId || triple_count[root] > triple_count[best] ||
        (triple_count[root] == triple_count[best] && entity_count[root] > entity_count[best])) {
      best = root;  // roots are minimal entity ids, so first win = smallest id
    }
  }

  DatasetSplit out;
  out.seed = split.seed;
  if (best == kInvalidId) {
    out.train = KnowledgeGraph(split.train.vocab_ptr(), {});
    if (stats) *stats = ComponentStats{0, 0, 0, 0, split.valid.size(), split.test.size()};
    return out;
  }

  std::vector<bool> kept_entity(n_entities, false);
  for (std::uint32_t e = 0; e < n_entities; ++e) {
    if (seen[e] && uf.find(e) == best) kept_entity[e] = true;
  }
  std::vector<Triple> kept_train;
  kept_train.reserve(triple_count[best]);
  for (const Triple& t : train) {
    if (kept_entity[t.head]) kept_train.push_back(t);
  }
  const auto keep_held_out = [&kept_entity](const std::vector<Triple>& triples,
                                            std::size_t* dropped) {
    std::vector<Triple> kept;
    kept.reserve(triples.size());
    for (const Triple& t : triples) {
      if (kept_entity[t.head] && kept_entity[t.tail]) {
        kept.push_back(t);
      } else if (dropped) {
        ++*dropped;
      }
    }
    return kept;
  };
  ComponentStats local{};
  local.components = n_components;
  local.kept_triples = kept_train.size();
  local.dropped_triples = train.size() - kept_train.size();
  local.kept_entities = entity_count[best];
  out.valid = keep_held_out(split.valid, &local.valid_dropped);
  out.test = keep_held_out(split.test, &local.test_dropped);
  out.train = KnowledgeGraph(split.train.vocab_ptr(), std::move(kept_train));
  if (stats) *stats = local;
  return out;
}

std::vector<EntityType> assign_entity_types(const KnowledgeGraph& graph,
                                            const RelationSchema& schema) {
  const std::size_t n = graph.num_entities();
  std::vector<EntityType> types(n, EntityType::Unknown);

  // Rule table in precedence order; the first relation whose tail an entity
  // is wins. Location-like relations share one rule slot.
  struct Rule {
    std::optional<RelationId> relation;
    EntityType type;
  };
  const Rule tail_rules[] = {
      {schema.gender, EntityType::Gender},
      {schema.religion, EntityType::Religion},
      {schema.cause_of_death, EntityType::CauseOfDeath},
      {schema.ethnicity, EntityType::Ethnicity},
      {schema.profession, EntityType::Profession},
      {schema.institution, EntityType::Institution},
      {schema.location, EntityType::Location},
      {schema.place_of_birth, EntityType::Location},
      {schema.place_of_death, EntityType::Location},
      {schema.nationality, EntityType::Location},
  };

  // rank 0..9 = tail rules, 10 = person, 255 = none
  std::vector<std::uint8_t> rank(n, 255);
  std::vector<EntityType> rule_type(n, EntityType::Unknown);
  const auto apply = [&](EntityId e, std::uint8_t r, EntityType type) {
    if (r < rank[e]) {
      rank[e] = r;
      rule_type[e] = type;
    }
  };
  const auto is_person_relation = [&schema](RelationId r) {
    const auto is = [r](const std::optional<RelationId>& id) { return id && *id == r; };
    return is(schema.parent) || is(schema.child) || is(schema.spouse) || is(schema.sibling);
  };

  for (const Triple& t : graph.triples()) {
    std::uint8_t tail_rank = 255;
    EntityType tail_type = EntityType::Unknown;
    for (std::uint8_t i = 0; i < std::size(tail_rules); ++i) {
      if (tail_rules[i].relation && *tail_rules[i].relation == t.relation) {
        tail_rank = i;
        tail_type = tail_rules[i].type;
        break;
      }
    }
    if (tail_rank != 255) {
      apply(t.tail, tail_rank, tail_type);
    } else if (is_person_relation(t.relation)) {
      apply(t.tail, 10, EntityType::Person);
    }
    apply(t.head, 10, EntityType::Person);
  }
  for (std::size_t e = 0; e < n; ++e) {
    types[e] = rank[e] == 255 ? EntityType::Unknown : rule_type[e];
  }
  return types;
}

std::map<EntityId, std::vector<EntityId>> sibling_map(const KnowledgeGraph& graph,
                                                      RelationId parent_relation) {
  // parents[e] filled only for entities with parent out-edges; the pairing
  // requires exactly two distinct parents per child.
  std::map<EntityId, std::vector<EntityId>> parents;
  for (const Triple& t : graph.triples()) {
    if (t.relation == parent_relation) parents[t.head].push_back(t.tail);
  }
  std::map<std::pair<EntityId, EntityId>, std::vector<EntityId>> families;
  for (auto& [child, ps] : parents) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (ps.size() == 2) {
      families[{ps[0], ps[1]}].push_back(child);
    }
  }
  std::map<EntityId, std::vector<EntityId>> siblings;
  for (const auto& [pair, children] : families) {
    if (children.size() < 2) continue;
    for (const EntityId a : children) {
      for (const EntityId b : children) {
        if (a != b) siblings[a].push_back(b);
      }
    }
  }
  for (auto& [child, sibs] : siblings) {
    std::sort(sibs.begin(), sibs.end());
    sibs.erase(std::unique(sibs.begin(), sibs.end()), sibs.end());
  }
  return siblings;
}

std::vector<Triple> infer_siblings(const KnowledgeGraph& graph, RelationId parent_relation,
                                   RelationId sibling_relation) {
  std::vector<Triple> out;
  for (const auto& [child, sibs] : sibling_map(graph, parent_relation)) {
    for (const EntityId s : sibs) {
      out.push_back(Triple{child, sibling_relation, s});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KnowledgeGraph combine_splits(const DatasetSplit& split) {
  std::vector<Triple> all = split.train.triples();
  all.insert(all.end(), split.valid.begin(), split.valid.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  return KnowledgeGraph(split.train.vocab_ptr(), std::move(all));
}

DatasetSplit build_fb14(const DatasetSplit& split, std::uint64_t seed,
                        std::size_t* sibling_count) {
  const auto& old_vocab = split.train.vocab();
  const auto schema = RelationSchema::resolve(old_vocab);
  if (!schema.parent) {
    throw LookupError("cannot infer siblings: no parent relation in the vocabulary");
  }

  auto vocab = std::make_shared<Vocabulary>(old_vocab);
  const RelationId sibling_rel = vocab->relations().add("sibling");

  const KnowledgeGraph combined = combine_splits(split);
  std::vector<Triple> siblings = infer_siblings(combined, *schema.parent, sibling_rel);
  if (sibling_count) *sibling_count = siblings.size();

  Rng rng(seed);
  rng.shuffle(siblings);
  const auto sizes = apportion(siblings.size(), SplitProportions{});

  DatasetSplit out;
  out.seed = seed;
  std::vector<Triple> train = split.train.triples();
  train.insert(train.end(), siblings.begin(), siblings.begin() + sizes[0]);
  out.valid = split.valid;
  out.valid.insert(out.valid.end(), siblings.begin() + sizes[0],
                   siblings.begin() + sizes[0] + sizes[1]);
  out.test = split.test;
  out.test.insert(out.test.end(), siblings.begin() + sizes[0] + sizes[1], siblings.end());
  std::sort(out.valid.begin(), out.valid.end());
  std::sort(out.test.begin(), out.test.end());
  out.train = KnowledgeGraph(std::move(vocab), std::move(train));
  return out;
}

namespace {

void write_triples_tsv(const std::filesystem::path& path, const Vocabulary& vocab,
                       const std::vector<Triple>& triples) {
  std::string content;
  for (const Triple& t : triples) {
    content += vocab.entity_name(t.head);
    content += '\t';
    content += vocab.relation_name(t.relation);
    content += '\t';
    content += vocab.entity_name(t.tail);
    content += '\n';
  }
  write_file(path, content);
}

}  // namespace

void save_dataset(const std::filesystem::path& dir, const DatasetSplit& split,
                  const nlohmann::json& manifest) {
  std::filesystem::create_directories(dir);
  const Vocabulary& vocab = split.train.vocab();
  write_triples_tsv(dir / "train.tsv", vocab, split.train.triples());
  write_triples_tsv(dir / "valid.tsv", vocab, split.valid);
  write_triples_tsv(dir / "test.tsv", vocab, split.test);
  if (split.train.has_entity_types()) {
    std::string content;
    for (EntityId e = 0; e < vocab.entities().size(); ++e) {
      content += vocab.entity_name(e);
      content += '\t';
      content += to_string(split.train.entity_type(e));
      content += '\n';
    }
    write_file(dir / "entity_types.tsv", content);
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const std::filesystem::path& dir) {
  auto vocab = std::make_shared<Vocabulary>();
  std::vector<Triple> train = load_triples(dir / "train.tsv", *vocab);
  Dataset dataset;
  dataset.split.valid = load_triples(dir / "valid.tsv", *vocab);
  dataset.split.test = load_triples(dir / "test.tsv", *vocab);
  std::sort(dataset.split.valid.begin(), dataset.split.valid.end());
  std::sort(dataset.split.test.begin(), dataset.split.test.end());

  std::vector<EntityType> types;
  const auto types_path = dir / "entity_types.tsv";
  if (std::filesystem::exists(types_path)) {
    types.assign(vocab->entities().size(), EntityType::Unknown);
    std::ifstream in(types_path);
    if (!in) {
      throw IoError("cannot open entity type file: " + types_path.string());
    }
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw ParseError(types_path.string() + ":" + std::to_string(line_number) +
                         ": expected name<TAB>type");
      }
      const std::string name = line.substr(0, tab);
      const std::string type_name = line.substr(tab + 1);
      const auto id = vocab->entities().find(name);
      if (!id) continue;  // typed entity absent from the triple files
      const auto type = entity_type_from_string(type_name);
      if (!type) {
        throw ParseError(types_path.string() + ":" + std::to_string(line_number) +
                         ": unknown entity type '" + type_name + "'");
      }
      types[*id] = *type;
    }
  }

  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    dataset.manifest = nlohmann::json::parse(read_file(manifest_path), nullptr, true, true);
    if (dataset.manifest.contains("seed")) {
      dataset.split.seed = dataset.manifest["seed"].get<std::uint64_t>();
    }
  }

  dataset.vocab = vocab;
  dataset.split.train = KnowledgeGraph(vocab, std::move(train));
  if (!types.empty()) {
    dataset.split.train.set_entity_types(std::move(types));
  }
  return dataset;
}

}  // namespace linklogic
