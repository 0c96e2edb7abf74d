#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linklogic/benchmark.hpp"
#include "linklogic/dataset.hpp"
#include "linklogic/embedding.hpp"
#include "linklogic/explainer.hpp"
#include "linklogic/graph.hpp"
#include "linklogic/heuristic.hpp"
#include "linklogic/path.hpp"

namespace linklogic {

enum class TruthCategory : std::uint8_t { True, False, Nonsense };
const char* to_string(TruthCategory category);
std::optional<TruthCategory> truth_category_from_string(std::string_view name);

struct TruthSample {
  Triple triple;
  TruthCategory category = TruthCategory::True;
};

// Per relation: up to per_relation true triples sampled without replacement
// (all of them, with a logged warning, when the relation has fewer), plus one
// False and one Nonsense corruption per true triple. False resamples the tail
// within the tail's entity type; Nonsense over all entities. Corruptions
// never collide with graph triples or with each other; a triple whose
// corruption cannot be found within the retry budget is skipped with a
// warning. The graph must carry entity types.
std::vector<TruthSample> sample_truth_queries(const KnowledgeGraph& graph,
                                              std::size_t per_relation, std::uint64_t seed);

// One row per (query, method) pair; only the fields a sweep fills are
// meaningful for it. Everything an aggregate needs is in the record, so
// aggregates are exactly recomputable.
struct QueryRecord {
  Triple query;
  std::string method;             // "linklogic" or "heuristic@<threshold>"
  std::string truth;              // truth sweep
  std::string variant;            // tautology: with/without_query_inverse
  std::string relation_category;  // Family / Location / Other
  double kge_plausibility = 0.0;
  std::size_t n_paths = 0;
  std::optional<double> fidelity;  // absent for the heuristic
  std::map<std::size_t, double> ndcg;  // parents sweep, by k
  std::optional<std::size_t> sibling_count;
  std::vector<Path> ranked_paths;             // descending by value
  std::vector<double> ranked_values;          // coefficient or score
  std::vector<std::string> ranked_categories; // benchmark category or "other"
};

struct ExperimentReport {
  std::string kind;  // "truth", "parents", "tautology"
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<QueryRecord> records;
  std::map<std::string, double> aggregates;

  nlohmann::json to_json(const Vocabulary& vocab) const;
  static ExperimentReport from_json(const nlohmann::json& data);
  // True when the stored aggregates equal a recomputation from the records.
  bool validate() const;
};

// Recomputes the aggregate map from the records (dispatch on report.kind).
std::map<std::string, double> compute_aggregates(const ExperimentReport& report);

// Plot-ready CSV bundles keyed by file name.
std::map<std::string, std::string> report_csvs(const ExperimentReport& report,
                                               const Vocabulary& vocab);

struct TruthSweepOptions {
  PerturbationConfig explain;
  std::vector<double> thresholds{0.9, 0.95};
  bool run_linklogic = true;
  std::size_t per_relation = 100;
  bool exclude_query_inverse = false;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

// KGE plausibility, path counts, and fidelity across True/False/Nonsense
// queries. The graph is the combined splits with entity types set.
ExperimentReport run_truth_sweep(const EmbeddingStore& store, const KnowledgeGraph& combined,
                                 const RelationSchema& schema, const TruthSweepOptions& options);

struct ParentsSweepOptions {
  PerturbationConfig explain;
  std::vector<double> thresholds{0.9, 0.95};
  bool run_linklogic = true;
  // Applied to the benchmark and the feature pool together.
  bool include_query_inverse = false;
  std::size_t k_max = 7;
  std::size_t max_queries = 0;  // 0 = every benchmark query
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

// NDCG@k against the benchmark, path counts and fidelity by sibling count.
ExperimentReport run_parents_sweep(const EmbeddingStore& store, const DatasetSplit& split,
                                   const RelationSchema& schema,
                                   const ParentsSweepOptions& options);

struct TautologyOptions {
  PerturbationConfig explain;
  std::size_t max_queries = 0;  // 0 = every single-sibling query
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

// Single-sibling parent queries explained twice: with the query-inverse
// feature available and with it excluded. Reports how often the inverse ranks
// first, its coefficient margin, and the category histogram per variant.
ExperimentReport run_tautology_experiment(const EmbeddingStore& store, const DatasetSplit& split,
                                          const RelationSchema& schema,
                                          const TautologyOptions& options);

}  // namespace linklogic
