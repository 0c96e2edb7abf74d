#include "linklogic/benchmark.hpp"

#include <algorithm>
#include <sstream>

#include "linklogic/util.hpp"

namespace linklogic {

double category_confidence(BenchmarkCategory category) {
  switch (category) {
    case BenchmarkCategory::QueryInverse:
    case BenchmarkCategory::SiblingParent:
    case BenchmarkCategory::ChildSibling:
    case BenchmarkCategory::SiblingEdge:
      return 1.0;
    case BenchmarkCategory::ParentSpouse:
    case BenchmarkCategory::CoParent:
    case BenchmarkCategory::SpouseEdge:
      return 0.5;
  }
  return 0.0;
}

bool category_needs_sibling_edges(BenchmarkCategory category) {
  return category == BenchmarkCategory::SiblingParent ||
         category == BenchmarkCategory::SiblingEdge;
}

const char* to_string(BenchmarkCategory category) {
  switch (category) {
    case BenchmarkCategory::QueryInverse: return "query_inverse";
    case BenchmarkCategory::SiblingParent: return "sibling_parent";
    case BenchmarkCategory::ChildSibling: return "child_sibling";
    case BenchmarkCategory::SiblingEdge: return "sibling_edge";
    case BenchmarkCategory::ParentSpouse: return "parent_spouse";
    case BenchmarkCategory::CoParent: return "co_parent";
    case BenchmarkCategory::SpouseEdge: return "spouse_edge";
  }
  return "query_inverse";
}

std::optional<BenchmarkCategory> benchmark_category_from_string(std::string_view name) {
  static const std::pair<std::string_view, BenchmarkCategory> kNames[] = {
      {"query_inverse", BenchmarkCategory::QueryInverse},
      {"sibling_parent", BenchmarkCategory::SiblingParent},
      {"child_sibling", BenchmarkCategory::ChildSibling},
      {"sibling_edge", BenchmarkCategory::SiblingEdge},
      {"parent_spouse", BenchmarkCategory::ParentSpouse},
      {"co_parent", BenchmarkCategory::CoParent},
      {"spouse_edge", BenchmarkCategory::SpouseEdge},
  };
  for (const auto& [text, category] : kNames) {
    if (text == name) return category;
  }
  return std::nullopt;
}

namespace {

using CanonHop = std::array<std::uint32_t, 3>;
using CanonKey = std::vector<CanonHop>;

// Edge in direction-free form: child edges become parent edges; symmetric
// relations order their endpoints by id.
CanonHop canonical_hop(EntityId a, RelationId r, EntityId b, const RelationSchema& schema) {
  if (schema.child && r == *schema.child && schema.parent) {
    return {b, *schema.parent, a};
  }
  if ((schema.spouse && r == *schema.spouse) || (schema.sibling && r == *schema.sibling)) {
    return {std::min(a, b), r, std::max(a, b)};
  }
  return {a, r, b};
}

// Paths match either traversal direction: the key is the smaller of the hop
// sequence and its reverse.
CanonKey canonical_key(const Path& path, const RelationSchema& schema) {
  CanonKey key;
  key.reserve(path.length());
  for (std::size_t hop = 0; hop < path.length(); ++hop) {
    key.push_back(
        canonical_hop(path.entities[hop], path.relations[hop], path.entities[hop + 1], schema));
  }
  CanonKey reversed(key.rbegin(), key.rend());
  return std::min(key, reversed);
}

struct EdgeOracle {
  const KnowledgeGraph& combined;
  const std::vector<Triple>& valid;  // sorted
  const std::vector<Triple>& test;   // sorted
  const RelationSchema& schema;

  std::vector<Triple> orientations(EntityId a, RelationId r, EntityId b) const {
    std::vector<Triple> out{{a, r, b}};
    if (const auto inv = schema.inverse(r)) {
      out.push_back({b, *inv, a});
    }
    return out;
  }

  bool exists(EntityId a, RelationId r, EntityId b) const {
    for (const Triple& t : orientations(a, r, b)) {
      if (combined.contains(t)) return true;
    }
    return false;
  }

  std::uint8_t split_tags(EntityId a, RelationId r, EntityId b,
                          const KnowledgeGraph& train) const {
    std::uint8_t mask = 0;
    for (const Triple& t : orientations(a, r, b)) {
      if (train.contains(t)) mask |= kSplitTrain;
      if (std::binary_search(valid.begin(), valid.end(), t)) mask |= kSplitValid;
      if (std::binary_search(test.begin(), test.end(), t)) mask |= kSplitTest;
    }
    return mask;
  }
};

}  // namespace

Benchmark::Benchmark(std::vector<BenchmarkEntry> entries, RelationSchema schema,
                     std::map<EntityId, std::size_t> sibling_counts, BenchmarkOptions options)
    : schema_(schema), sibling_counts_(std::move(sibling_counts)), options_(options) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const BenchmarkEntry& a, const BenchmarkEntry& b) {
                     if (a.query != b.query) return a.query < b.query;
                     if (a.category != b.category) return a.category < b.category;
                     return a.path < b.path;
                   });
  // Dedup by canonical key within a query; category order makes the
  // higher-confidence template win.
  std::vector<CanonKey> kept_keys;
  for (BenchmarkEntry& entry : entries) {
    CanonKey key = canonical_key(entry.path, schema_);
    const bool new_query = entries_.empty() || entries_.back().query != entry.query;
    if (new_query) {
      kept_keys.clear();
    }
    if (std::find(kept_keys.begin(), kept_keys.end(), key) != kept_keys.end()) {
      continue;
    }
    kept_keys.push_back(key);
    entries_.push_back(std::move(entry));
    if (new_query) {
      queries_.push_back(entries_.back().query);
      query_ranges_.emplace_back(entries_.size() - 1, entries_.size());
    } else {
      query_ranges_.back().second = entries_.size();
    }
    canonical_keys_.push_back(std::move(key));
  }
}

std::span<const BenchmarkEntry> Benchmark::entries_for(const Triple& query) const {
  const auto it = std::lower_bound(queries_.begin(), queries_.end(), query);
  if (it == queries_.end() || *it != query) return {};
  const auto& [begin, end] = query_ranges_[static_cast<std::size_t>(it - queries_.begin())];
  return {entries_.data() + begin, entries_.data() + end};
}

double Benchmark::relevance(const Triple& query, const Path& path) const {
  if (const auto category = category_of(query, path)) {
    return category_confidence(*category);
  }
  return 0.0;
}

std::optional<BenchmarkCategory> Benchmark::category_of(const Triple& query,
                                                        const Path& path) const {
  const auto it = std::lower_bound(queries_.begin(), queries_.end(), query);
  if (it == queries_.end() || *it != query) return std::nullopt;
  const auto& [begin, end] = query_ranges_[static_cast<std::size_t>(it - queries_.begin())];
  const CanonKey key = canonical_key(path, schema_);
  for (std::size_t i = begin; i < end; ++i) {
    if (canonical_keys_[i] == key) {
      return entries_[i].category;
    }
  }
  return std::nullopt;
}

std::vector<double> Benchmark::ideal_relevances(const Triple& query) const {
  const auto span = entries_for(query);
  std::vector<double> out;
  out.reserve(span.size());
  for (const BenchmarkEntry& entry : span) out.push_back(entry.confidence);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::size_t Benchmark::sibling_count(EntityId child) const {
  const auto it = sibling_counts_.find(child);
  return it == sibling_counts_.end() ? 0 : it->second;
}

nlohmann::json Benchmark::summary() const {
  std::map<std::string, std::size_t> histogram;
  std::map<std::string, std::size_t> category_counts;
  std::size_t inverse_only = 0;
  for (std::size_t q = 0; q < queries_.size(); ++q) {
    const auto& [begin, end] = query_ranges_[q];
    histogram[std::to_string(end - begin)] += 1;
    bool all_inverse = true;
    for (std::size_t i = begin; i < end; ++i) {
      category_counts[to_string(entries_[i].category)] += 1;
      all_inverse = all_inverse && entries_[i].category == BenchmarkCategory::QueryInverse;
    }
    if (all_inverse) ++inverse_only;
  }
  nlohmann::json summary{
      {"n_queries", queries_.size()},
      {"n_entries", entries_.size()},
      {"include_query_inverse", options_.include_query_inverse},
      {"paths_per_query_histogram", histogram},
      {"category_counts", category_counts},
  };
  if (options_.include_query_inverse) {
    summary["n_queries_inverse_only"] = inverse_only;
    summary["n_queries_beyond_inverse"] = queries_.size() - inverse_only;
  }
  return summary;
}

Benchmark build_benchmark(const DatasetSplit& split, const RelationSchema& schema,
                          const BenchmarkOptions& options) {
  if (!schema.parent) {
    throw LookupError("benchmark requires a parent relation in the vocabulary");
  }
  const KnowledgeGraph combined = combine_splits(split);
  std::vector<Triple> valid = split.valid;
  std::vector<Triple> test = split.test;
  std::sort(valid.begin(), valid.end());
  std::sort(test.begin(), test.end());
  const EdgeOracle oracle{combined, valid, test, schema};

  const auto siblings = sibling_map(combined, *schema.parent);
  std::map<EntityId, std::size_t> sibling_counts;
  for (const auto& [child, sibs] : siblings) sibling_counts[child] = sibs.size();

  // Co-parents come from either orientation of the parent/child pair.
  const auto parents_of = [&](EntityId c) {
    std::vector<EntityId> out;
    for (const std::uint32_t idx : combined.outgoing(c)) {
      const Triple& t = combined.triples()[idx];
      if (t.relation == *schema.parent) out.push_back(t.tail);
    }
    if (schema.child) {
      for (const std::uint32_t idx : combined.incoming(c)) {
        const Triple& t = combined.triples()[idx];
        if (t.relation == *schema.child) out.push_back(t.head);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  const auto sibling_edge = [&](EntityId a, EntityId b) {
    return schema.sibling && oracle.exists(a, *schema.sibling, b);
  };
  const auto spouse_edge = [&](EntityId a, EntityId b) {
    return schema.spouse && oracle.exists(a, *schema.spouse, b);
  };

  std::vector<BenchmarkEntry> entries;
  const auto emit = [&](const Triple& query, BenchmarkCategory category, Path path) {
    BenchmarkEntry entry;
    entry.query = query;
    entry.category = category;
    entry.confidence = category_confidence(category);
    entry.edge_splits.reserve(path.length());
    for (std::size_t hop = 0; hop < path.length(); ++hop) {
      entry.edge_splits.push_back(oracle.split_tags(path.entities[hop], path.relations[hop],
                                                    path.entities[hop + 1], split.train));
    }
    entry.path = std::move(path);
    entries.push_back(std::move(entry));
  };

  for (const Triple& query : combined.triples()) {
    if (query.relation != *schema.parent) continue;
    const EntityId c = query.head;
    const EntityId p = query.tail;

    if (options.include_query_inverse && schema.child) {
      emit(query, BenchmarkCategory::QueryInverse, Path{{p, c}, {*schema.child}});
    }

    const auto sib_it = siblings.find(c);
    if (sib_it != siblings.end()) {
      for (const EntityId s : sib_it->second) {
        if (schema.sibling && sibling_edge(c, s) && oracle.exists(s, *schema.parent, p)) {
          emit(query, BenchmarkCategory::SiblingParent,
               Path{{c, s, p}, {*schema.sibling, *schema.parent}});
        }
        if (schema.child && oracle.exists(p, *schema.child, s)) {
          emit(query, BenchmarkCategory::ChildSibling, Path{{p, s}, {*schema.child}});
        }
        if (schema.sibling && sibling_edge(c, s)) {
          emit(query, BenchmarkCategory::SiblingEdge, Path{{c, s}, {*schema.sibling}});
        }
      }
    }

    for (const EntityId p2 : parents_of(c)) {
      if (p2 == p) continue;
      if (spouse_edge(p2, p)) {
        emit(query, BenchmarkCategory::ParentSpouse,
             Path{{c, p2, p}, {*schema.parent, *schema.spouse}});
      }
      emit(query, BenchmarkCategory::CoParent, Path{{c, p2}, {*schema.parent}});
      if (spouse_edge(p, p2)) {
        emit(query, BenchmarkCategory::SpouseEdge, Path{{p, p2}, {*schema.spouse}});
      }
    }
  }
  return Benchmark(std::move(entries), schema, std::move(sibling_counts), options);
}

std::string benchmark_to_jsonl(const Benchmark& benchmark, const Vocabulary& vocab) {
  std::string out;
  for (const BenchmarkEntry& entry : benchmark.entries()) {
    nlohmann::json entities = nlohmann::json::array();
    for (const EntityId e : entry.path.entities) entities.push_back(vocab.entity_name(e));
    nlohmann::json relations = nlohmann::json::array();
    for (const RelationId r : entry.path.relations) relations.push_back(vocab.relation_name(r));
    nlohmann::json splits = nlohmann::json::array();
    for (const std::uint8_t mask : entry.edge_splits) {
      nlohmann::json tags = nlohmann::json::array();
      if (mask & kSplitTrain) tags.push_back("train");
      if (mask & kSplitValid) tags.push_back("valid");
      if (mask & kSplitTest) tags.push_back("test");
      splits.push_back(tags);
    }
    const nlohmann::json line{
        {"query",
         {{"head", vocab.entity_name(entry.query.head)},
          {"relation", vocab.relation_name(entry.query.relation)},
          {"tail", vocab.entity_name(entry.query.tail)}}},
        {"path", {{"entities", entities}, {"relations", relations}}},
        {"category", to_string(entry.category)},
        {"confidence", entry.confidence},
        {"edge_splits", splits},
        {"sibling_count", benchmark.sibling_count(entry.query.head)},
    };
    out += line.dump();
    out += '\n';
  }
  return out;
}

Benchmark benchmark_from_jsonl(std::string_view text, const Vocabulary& vocab,
                               const RelationSchema& schema) {
  std::vector<BenchmarkEntry> entries;
  std::map<EntityId, std::size_t> sibling_counts;
  BenchmarkOptions options;

  const auto entity_id = [&vocab](const std::string& name) {
    const auto id = vocab.entities().find(name);
    if (!id) throw LookupError("unknown entity in benchmark file: " + name);
    return *id;
  };
  const auto relation_id = [&vocab](const std::string& name) {
    const auto id = vocab.relations().find(name);
    if (!id) throw LookupError("unknown relation in benchmark file: " + name);
    return *id;
  };

  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("benchmark line " + std::to_string(line_number) + ": " + e.what());
    }
    BenchmarkEntry entry;
    entry.query.head = entity_id(parsed.at("query").at("head").get<std::string>());
    entry.query.relation = relation_id(parsed.at("query").at("relation").get<std::string>());
    entry.query.tail = entity_id(parsed.at("query").at("tail").get<std::string>());
    for (const auto& name : parsed.at("path").at("entities")) {
      entry.path.entities.push_back(entity_id(name.get<std::string>()));
    }
    for (const auto& name : parsed.at("path").at("relations")) {
      entry.path.relations.push_back(relation_id(name.get<std::string>()));
    }
    const auto category = benchmark_category_from_string(parsed.at("category").get<std::string>());
    if (!category) {
      throw ParseError("benchmark line " + std::to_string(line_number) + ": unknown category '" +
                       parsed.at("category").get<std::string>() + "'");
    }
    entry.category = *category;
    entry.confidence = parsed.at("confidence").get<double>();
    for (const auto& tags : parsed.at("edge_splits")) {
      std::uint8_t mask = 0;
      for (const auto& tag : tags) {
        const std::string name = tag.get<std::string>();
        if (name == "train") mask |= kSplitTrain;
        if (name == "valid") mask |= kSplitValid;
        if (name == "test") mask |= kSplitTest;
      }
      entry.edge_splits.push_back(mask);
    }
    if (parsed.contains("sibling_count")) {
      sibling_counts[entry.query.head] = parsed["sibling_count"].get<std::size_t>();
    }
    if (entry.category == BenchmarkCategory::QueryInverse) {
      options.include_query_inverse = true;
    }
    entries.push_back(std::move(entry));
  }
  return Benchmark(std::move(entries), schema, std::move(sibling_counts), options);
}

}  // namespace linklogic
