#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "linklogic/dataset.hpp"
#include "linklogic/graph.hpp"
#include "linklogic/path.hpp"
#include "linklogic/types.hpp"

namespace linklogic {

// Ground-truth explanation templates for (c, parent, p) queries. Confidence-1
// categories are entailed by family structure; confidence-0.5 ones are merely
// suggestive. Sibling-edge categories exist only when the dataset has a
// sibling relation.
enum class BenchmarkCategory : std::uint8_t {
  QueryInverse,    // {p, child, c}
  SiblingParent,   // {c, sibling, s, parent, p}
  ChildSibling,    // {p, child, s}
  SiblingEdge,     // {c, sibling, s}
  ParentSpouse,    // {c, parent, p2, spouse, p}
  CoParent,        // {c, parent, p2}
  SpouseEdge,      // {p, spouse, p2}
};

double category_confidence(BenchmarkCategory category);
bool category_needs_sibling_edges(BenchmarkCategory category);
const char* to_string(BenchmarkCategory category);
std::optional<BenchmarkCategory> benchmark_category_from_string(std::string_view name);

// Bits marking which splits contain a path edge (any equivalent orientation).
enum SplitTag : std::uint8_t {
  kSplitTrain = 1,
  kSplitValid = 2,
  kSplitTest = 4,
};

struct BenchmarkEntry {
  Triple query;
  Path path;
  BenchmarkCategory category = BenchmarkCategory::QueryInverse;
  double confidence = 0.0;
  std::vector<std::uint8_t> edge_splits;  // SplitTag mask per path edge
};

struct BenchmarkOptions {
  bool include_query_inverse = false;
};

// Relevance lookups canonicalize paths before comparing, so all equivalent
// orientations of an entry match: (a, child, b) == (b, parent, a), and
// spouse/sibling edges are direction-free. Two-hop paths also match their
// reversed traversal.
class Benchmark {
 public:
  Benchmark() = default;
  Benchmark(std::vector<BenchmarkEntry> entries, RelationSchema schema,
            std::map<EntityId, std::size_t> sibling_counts, BenchmarkOptions options);

  const std::vector<BenchmarkEntry>& entries() const { return entries_; }
  std::span<const BenchmarkEntry> entries_for(const Triple& query) const;
  // Sorted unique queries that have at least one entry.
  const std::vector<Triple>& queries() const { return queries_; }

  double relevance(const Triple& query, const Path& path) const;
  // All entry confidences for the query, descending: the ideal pool for NDCG.
  std::vector<double> ideal_relevances(const Triple& query) const;
  // Category of the matching entry, if any.
  std::optional<BenchmarkCategory> category_of(const Triple& query, const Path& path) const;

  std::size_t sibling_count(EntityId child) const;
  const BenchmarkOptions& options() const { return options_; }

  // Query counts, per-query path-count histogram, and (when the inverse
  // category is included) the count of queries whose only entry is the
  // inverse.
  nlohmann::json summary() const;

 private:
  std::vector<BenchmarkEntry> entries_;  // sorted by (query, category, path)
  std::vector<Triple> queries_;
  std::vector<std::pair<std::size_t, std::size_t>> query_ranges_;
  std::vector<std::vector<std::array<std::uint32_t, 3>>> canonical_keys_;  // per entry
  RelationSchema schema_;
  std::map<EntityId, std::size_t> sibling_counts_;
  BenchmarkOptions options_;
};

// Instantiates every category whose edges all exist in the combined splits
// (in any equivalent orientation); never invents edges. Chains require s to
// be a structural sibling of c and p2 a co-parent (distinct from p).
Benchmark build_benchmark(const DatasetSplit& split, const RelationSchema& schema,
                          const BenchmarkOptions& options = {});

// One JSON object per line; parse with benchmark_from_jsonl. Entries carry
// names, category, confidence, and per-edge split tags.
std::string benchmark_to_jsonl(const Benchmark& benchmark, const Vocabulary& vocab);
Benchmark benchmark_from_jsonl(std::string_view text, const Vocabulary& vocab,
                               const RelationSchema& schema);

}  // namespace linklogic
