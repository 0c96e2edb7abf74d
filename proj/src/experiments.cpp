#include "linklogic/experiments.hpp"

#include <algorithm>
#include <set>

#include "linklogic/metrics.hpp"
#include "linklogic/rng.hpp"
#include "linklogic/util.hpp"

namespace linklogic {

const char* to_string(TruthCategory category) {
  switch (category) {
    case TruthCategory::True: return "True";
    case TruthCategory::False: return "False";
    case TruthCategory::Nonsense: return "Nonsense";
  }
  return "True";
}

std::optional<TruthCategory> truth_category_from_string(std::string_view name) {
  if (name == "True") return TruthCategory::True;
  if (name == "False") return TruthCategory::False;
  if (name == "Nonsense") return TruthCategory::Nonsense;
  return std::nullopt;
}

std::vector<TruthSample> sample_truth_queries(const KnowledgeGraph& graph,
                                              std::size_t per_relation, std::uint64_t seed) {
  if (per_relation == 0) throw ConfigError("per_relation must be positive");
  if (!graph.has_entity_types()) {
    throw ConfigError("truth sampling requires entity types on the graph");
  }

  const std::size_t n_relations = graph.num_relations();
  std::vector<std::vector<Triple>> by_relation(n_relations);
  for (const Triple& t : graph.triples()) {
    by_relation[t.relation].push_back(t);
  }
  std::map<EntityType, std::vector<EntityId>> by_type;
  std::vector<EntityId> all_entities;
  for (EntityId e = 0; e < graph.num_entities(); ++e) {
    by_type[graph.entity_type(e)].push_back(e);
    all_entities.push_back(e);
  }

  constexpr std::size_t kRetryBudget = 1000;
  std::set<Triple> used_corruptions;
  std::vector<TruthSample> samples;

  for (RelationId r = 0; r < n_relations; ++r) {
    auto& triples = by_relation[r];
    if (triples.empty()) continue;
    if (triples.size() < per_relation) {
      log_event("truth_sample.short_relation",
                {{"relation", graph.vocab().relation_name(r)},
                 {"available", triples.size()},
                 {"requested", per_relation}});
    }
    const std::size_t take = std::min(per_relation, triples.size());
    Rng rng(derive_seed(seed, r));
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(triples.size() - i));
      std::swap(triples[i], triples[j]);
    }

    // A corrupted tail must not form a known triple or reuse a corruption.
    const auto corrupt = [&](const Triple& t, const std::vector<EntityId>& candidates)
        -> std::optional<Triple> {
      if (candidates.empty()) return std::nullopt;
      for (std::size_t attempt = 0; attempt < kRetryBudget; ++attempt) {
        const EntityId e = candidates[rng.uniform_index(candidates.size())];
        const Triple corrupted{t.head, t.relation, e};
        if (graph.contains(corrupted)) continue;
        if (used_corruptions.count(corrupted)) continue;
        return corrupted;
      }
      return std::nullopt;
    };

    for (std::size_t i = 0; i < take; ++i) {
      const Triple& truth = triples[i];
      const auto& same_type = by_type[graph.entity_type(truth.tail)];
      const auto false_triple = corrupt(truth, same_type);
      if (!false_triple) {
        log_event("truth_sample.skipped",
                  {{"relation", graph.vocab().relation_name(r)}, {"reason", "no False corruption"}});
        continue;
      }
      used_corruptions.insert(*false_triple);
      const auto nonsense_triple = corrupt(truth, all_entities);
      if (!nonsense_triple) {
        used_corruptions.erase(*false_triple);
        log_event("truth_sample.skipped", {{"relation", graph.vocab().relation_name(r)},
                                           {"reason", "no Nonsense corruption"}});
        continue;
      }
      used_corruptions.insert(*nonsense_triple);
      samples.push_back({truth, TruthCategory::True});
      samples.push_back({*false_triple, TruthCategory::False});
      samples.push_back({*nonsense_triple, TruthCategory::Nonsense});
    }
  }
  return samples;
}

namespace {

nlohmann::json perturbation_config_to_json(const PerturbationConfig& config) {
  return nlohmann::json{
      {"alpha", config.alpha},
      {"n_perturbations", config.n_perturbations},
      {"neighbor_k", config.neighbor_k},
      {"features_per_group", config.features_per_group},
      {"lambda", config.lambda},
      {"candidate_fanout", config.candidate_fanout},
      {"holdout_fraction", config.holdout_fraction},
  };
}

std::string heuristic_method_name(double threshold) {
  return "heuristic@" + format_double(threshold);
}

// Records keep at most this many ranked paths; counts and NDCG use the full
// ranking computed before truncation.
constexpr std::size_t kMaxStoredPaths = 50;

void store_ranking(QueryRecord& record, std::vector<Path> paths, std::vector<double> values,
                   std::vector<std::string> categories) {
  if (paths.size() > kMaxStoredPaths) {
    paths.resize(kMaxStoredPaths);
    values.resize(kMaxStoredPaths);
    categories.resize(kMaxStoredPaths);
  }
  record.ranked_paths = std::move(paths);
  record.ranked_values = std::move(values);
  record.ranked_categories = std::move(categories);
}

nlohmann::json triple_to_json(const Triple& t, const Vocabulary& vocab) {
  return nlohmann::json{
      {"head", t.head},           {"relation", t.relation},
      {"tail", t.tail},           {"head_name", vocab.entity_name(t.head)},
      {"relation_name", vocab.relation_name(t.relation)},
      {"tail_name", vocab.entity_name(t.tail)},
  };
}

Triple triple_from_json(const nlohmann::json& data) {
  return Triple{data.at("head").get<EntityId>(), data.at("relation").get<RelationId>(),
                data.at("tail").get<EntityId>()};
}

}  // namespace

nlohmann::json ExperimentReport::to_json(const Vocabulary& vocab) const {
  nlohmann::json out{
      {"kind", kind}, {"seed", seed}, {"config", config}, {"aggregates", aggregates}};
  nlohmann::json record_array = nlohmann::json::array();
  for (const QueryRecord& record : records) {
    nlohmann::json paths = nlohmann::json::array();
    for (std::size_t i = 0; i < record.ranked_paths.size(); ++i) {
      const Path& path = record.ranked_paths[i];
      nlohmann::json entity_names = nlohmann::json::array();
      for (const EntityId e : path.entities) entity_names.push_back(vocab.entity_name(e));
      nlohmann::json relation_names = nlohmann::json::array();
      for (const RelationId r : path.relations) relation_names.push_back(vocab.relation_name(r));
      paths.push_back(nlohmann::json{
          {"entities", path.entities},
          {"relations", path.relations},
          {"entity_names", entity_names},
          {"relation_names", relation_names},
          {"value", record.ranked_values[i]},
          {"category", record.ranked_categories[i]},
      });
    }
    nlohmann::json ndcg = nlohmann::json::object();
    for (const auto& [k, value] : record.ndcg) ndcg[std::to_string(k)] = value;
    nlohmann::json item{
        {"query", triple_to_json(record.query, vocab)},
        {"method", record.method},
        {"truth", record.truth},
        {"variant", record.variant},
        {"relation_category", record.relation_category},
        {"kge_plausibility", record.kge_plausibility},
        {"n_paths", record.n_paths},
        {"fidelity", record.fidelity ? nlohmann::json(*record.fidelity) : nlohmann::json()},
        {"ndcg", ndcg},
        {"sibling_count",
         record.sibling_count ? nlohmann::json(*record.sibling_count) : nlohmann::json()},
        {"paths", paths},
    };
    record_array.push_back(std::move(item));
  }
  out["records"] = std::move(record_array);
  return out;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& data) {
  ExperimentReport report;
  report.kind = data.at("kind").get<std::string>();
  report.seed = data.at("seed").get<std::uint64_t>();
  report.config = data.value("config", nlohmann::json());
  for (const auto& [key, value] : data.at("aggregates").items()) {
    report.aggregates[key] = value.get<double>();
  }
  for (const auto& item : data.at("records")) {
    QueryRecord record;
    record.query = triple_from_json(item.at("query"));
    record.method = item.at("method").get<std::string>();
    record.truth = item.value("truth", std::string());
    record.variant = item.value("variant", std::string());
    record.relation_category = item.value("relation_category", std::string());
    record.kge_plausibility = item.at("kge_plausibility").get<double>();
    record.n_paths = item.at("n_paths").get<std::size_t>();
    if (!item.at("fidelity").is_null()) record.fidelity = item["fidelity"].get<double>();
    for (const auto& [k, value] : item.at("ndcg").items()) {
      record.ndcg[std::stoul(k)] = value.get<double>();
    }
    if (!item.at("sibling_count").is_null()) {
      record.sibling_count = item["sibling_count"].get<std::size_t>();
    }
    for (const auto& path_item : item.at("paths")) {
      Path path;
      path.entities = path_item.at("entities").get<std::vector<EntityId>>();
      path.relations = path_item.at("relations").get<std::vector<RelationId>>();
      record.ranked_paths.push_back(std::move(path));
      record.ranked_values.push_back(path_item.at("value").get<double>());
      record.ranked_categories.push_back(path_item.at("category").get<std::string>());
    }
    report.records.push_back(std::move(record));
  }
  return report;
}

bool ExperimentReport::validate() const { return compute_aggregates(*this) == aggregates; }

namespace {

struct MeanAccumulator {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double x) {
    sum += x;
    ++count;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
};

}  // namespace

std::map<std::string, double> compute_aggregates(const ExperimentReport& report) {
  std::map<std::string, double> out;
  if (report.kind == "truth") {
    std::map<std::string, MeanAccumulator> kge, n_paths, fidelity;
    std::set<std::pair<Triple, std::string>> seen_queries;
    for (const QueryRecord& record : report.records) {
      if (seen_queries.emplace(record.query, record.truth).second) {
        kge[record.truth].add(record.kge_plausibility);
      }
      n_paths[record.method + "." + record.truth].add(static_cast<double>(record.n_paths));
      if (record.fidelity) fidelity[record.truth].add(*record.fidelity);
    }
    for (const auto& [key, acc] : kge) out["mean_kge_plausibility." + key] = acc.mean();
    for (const auto& [key, acc] : n_paths) out["mean_n_paths." + key] = acc.mean();
    for (const auto& [key, acc] : fidelity) out["mean_fidelity." + key] = acc.mean();
  } else if (report.kind == "parents") {
    std::map<std::string, MeanAccumulator> ndcg, n_paths, fidelity;
    MeanAccumulator overall_fidelity;
    for (const QueryRecord& record : report.records) {
      for (const auto& [k, value] : record.ndcg) {
        ndcg["mean_ndcg@" + std::to_string(k) + "." + record.method].add(value);
      }
      if (record.sibling_count) {
        n_paths[record.method + ".sibling_" + std::to_string(*record.sibling_count)].add(
            static_cast<double>(record.n_paths));
        if (record.fidelity) {
          fidelity["sibling_" + std::to_string(*record.sibling_count)].add(*record.fidelity);
        }
      }
      if (record.fidelity) overall_fidelity.add(*record.fidelity);
    }
    for (const auto& [key, acc] : ndcg) out[key] = acc.mean();
    for (const auto& [key, acc] : n_paths) out["mean_n_paths." + key] = acc.mean();
    for (const auto& [key, acc] : fidelity) out["mean_fidelity." + key] = acc.mean();
    if (overall_fidelity.count > 0) out["mean_fidelity"] = overall_fidelity.mean();
  } else if (report.kind == "tautology") {
    std::size_t with_records = 0, rank1_inverse = 0;
    MeanAccumulator top_coef, second_coef;
    std::map<std::string, double> path_counts;
    for (const QueryRecord& record : report.records) {
      if (record.variant == "with_query_inverse") {
        ++with_records;
        if (!record.ranked_categories.empty() &&
            record.ranked_categories.front() == "query_inverse") {
          ++rank1_inverse;
        }
        if (!record.ranked_values.empty()) top_coef.add(record.ranked_values.front());
        if (record.ranked_values.size() > 1) second_coef.add(record.ranked_values[1]);
      }
      for (const std::string& category : record.ranked_categories) {
        path_counts["path_count." + record.variant + "." + category] += 1.0;
      }
    }
    if (with_records > 0) {
      out["with_query_inverse.rank1_inverse_frequency"] =
          static_cast<double>(rank1_inverse) / static_cast<double>(with_records);
      out["with_query_inverse.mean_top_coefficient"] = top_coef.mean();
      out["with_query_inverse.mean_second_coefficient"] = second_coef.mean();
    }
    for (const auto& [key, value] : path_counts) out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> report_csvs(const ExperimentReport& report,
                                               const Vocabulary& vocab) {
  std::map<std::string, std::string> files;
  if (report.kind == "truth") {
    std::string a = "relation,relation_category,truth,kge_plausibility\n";
    std::string b = "method,relation_category,truth,n_paths\n";
    std::string c = "relation_category,truth,fidelity\n";
    std::set<std::pair<Triple, std::string>> seen;
    for (const QueryRecord& record : report.records) {
      if (seen.emplace(record.query, record.truth).second) {
        a += join_csv_row({vocab.relation_name(record.query.relation), record.relation_category,
                           record.truth, format_double(record.kge_plausibility)});
      }
      b += join_csv_row({record.method, record.relation_category, record.truth,
                         std::to_string(record.n_paths)});
      if (record.fidelity) {
        c += join_csv_row({record.relation_category, record.truth, format_double(*record.fidelity)});
      }
    }
    files["fig2a.csv"] = std::move(a);
    files["fig2b.csv"] = std::move(b);
    files["fig2c.csv"] = std::move(c);
  } else if (report.kind == "parents") {
    std::string d = "method,k,ndcg\n";
    std::string e = "method,sibling_count,n_paths\n";
    std::string f = "sibling_count,fidelity\n";
    for (const QueryRecord& record : report.records) {
      for (const auto& [k, value] : record.ndcg) {
        d += join_csv_row({record.method, std::to_string(k), format_double(value)});
      }
      if (record.sibling_count) {
        e += join_csv_row({record.method, std::to_string(*record.sibling_count),
                           std::to_string(record.n_paths)});
        if (record.fidelity) {
          f += join_csv_row(
              {std::to_string(*record.sibling_count), format_double(*record.fidelity)});
        }
      }
    }
    files["fig2d.csv"] = std::move(d);
    files["fig2e.csv"] = std::move(e);
    files["fig2f.csv"] = std::move(f);
  } else if (report.kind == "tautology") {
    std::map<std::string, std::size_t> counts;  // variant|category
    std::map<std::string, std::size_t> variant_totals;
    for (const QueryRecord& record : report.records) {
      for (const std::string& category : record.ranked_categories) {
        counts[record.variant + "," + category] += 1;
        variant_totals[record.variant] += 1;
      }
    }
    std::string content = "variant,category,count,share\n";
    for (const auto& [key, count] : counts) {
      const std::string variant = key.substr(0, key.find(','));
      const double share =
          static_cast<double>(count) / static_cast<double>(variant_totals[variant]);
      content += key + "," + std::to_string(count) + "," + format_double(share) + "\n";
    }
    const std::string figure = report.config.value("figure", std::string("fig3a"));
    files[figure + ".csv"] = std::move(content);
  }
  return files;
}

namespace {

struct MethodPlan {
  std::string name;
  bool is_linklogic = false;
  double threshold = 0.0;
};

std::vector<MethodPlan> make_method_plans(bool run_linklogic,
                                          const std::vector<double>& thresholds) {
  std::vector<MethodPlan> plans;
  if (run_linklogic) plans.push_back({"linklogic", true, 0.0});
  for (const double threshold : thresholds) {
    plans.push_back({heuristic_method_name(threshold), false, threshold});
  }
  if (plans.empty()) throw ConfigError("sweep needs at least one method");
  return plans;
}

}  // namespace

ExperimentReport run_truth_sweep(const EmbeddingStore& store, const KnowledgeGraph& combined,
                                 const RelationSchema& schema, const TruthSweepOptions& options) {
  options.explain.validate();
  const auto plans = make_method_plans(options.run_linklogic, options.thresholds);
  const auto samples =
      sample_truth_queries(combined, options.per_relation, derive_seed(options.seed, 9000));
  log_event("truth_sweep.start", {{"queries", samples.size()}, {"methods", plans.size()}});

  ExperimentReport report;
  report.kind = "truth";
  report.seed = options.seed;
  report.config = nlohmann::json{
      {"explain", perturbation_config_to_json(options.explain)},
      {"thresholds", options.thresholds},
      {"per_relation", options.per_relation},
      {"exclude_query_inverse", options.exclude_query_inverse},
      {"jobs", options.jobs},
  };
  report.records.resize(samples.size() * plans.size());

  parallel_for(samples.size(), options.jobs, [&](std::size_t i) {
    const TruthSample& sample = samples[i];
    const FeatureSpec spec =
        make_feature_spec(schema, sample.triple.relation, options.exclude_query_inverse);
    const double kge =
        plausibility(store, sample.triple.head, sample.triple.relation, sample.triple.tail);
    for (std::size_t m = 0; m < plans.size(); ++m) {
      QueryRecord& record = report.records[i * plans.size() + m];
      record.query = sample.triple;
      record.method = plans[m].name;
      record.truth = to_string(sample.category);
      record.relation_category = to_string(schema.category(sample.triple.relation));
      record.kge_plausibility = kge;
      std::vector<Path> paths;
      std::vector<double> values;
      if (plans[m].is_linklogic) {
        PerturbationConfig config = options.explain;
        config.seed = derive_seed(options.seed, 1000 + i);
        const Explanation explanation = explain(store, sample.triple, config, spec);
        record.n_paths = explanation.paths.size();
        record.fidelity = explanation.fidelity;
        for (const auto& ranked : explanation.paths) {
          paths.push_back(ranked.path);
          values.push_back(ranked.coefficient);
        }
      } else {
        HeuristicConfig config;
        config.threshold = plans[m].threshold;
        config.features_per_group = options.explain.features_per_group;
        config.candidate_fanout = options.explain.candidate_fanout;
        const auto kept = heuristic_paths(store, sample.triple, config, spec);
        record.n_paths = kept.size();
        for (const ScoredPath& scored : kept) {
          paths.push_back(scored.path);
          values.push_back(scored.score);
        }
      }
      std::vector<std::string> categories(paths.size(), "other");
      store_ranking(record, std::move(paths), std::move(values), std::move(categories));
    }
  });

  report.aggregates = compute_aggregates(report);
  log_event("truth_sweep.done", {{"records", report.records.size()}});
  return report;
}

ExperimentReport run_parents_sweep(const EmbeddingStore& store, const DatasetSplit& split,
                                   const RelationSchema& schema,
                                   const ParentsSweepOptions& options) {
  options.explain.validate();
  if (options.k_max == 0) throw ConfigError("k_max must be positive");
  const auto plans = make_method_plans(options.run_linklogic, options.thresholds);
  const Benchmark benchmark =
      build_benchmark(split, schema, BenchmarkOptions{options.include_query_inverse});
  std::vector<Triple> queries = benchmark.queries();
  if (options.max_queries > 0 && queries.size() > options.max_queries) {
    queries.resize(options.max_queries);
  }
  log_event("parents_sweep.start", {{"queries", queries.size()}, {"methods", plans.size()}});

  ExperimentReport report;
  report.kind = "parents";
  report.seed = options.seed;
  report.config = nlohmann::json{
      {"explain", perturbation_config_to_json(options.explain)},
      {"thresholds", options.thresholds},
      {"include_query_inverse", options.include_query_inverse},
      {"k_max", options.k_max},
      {"max_queries", options.max_queries},
      {"jobs", options.jobs},
  };
  report.records.resize(queries.size() * plans.size());

  parallel_for(queries.size(), options.jobs, [&](std::size_t i) {
    const Triple& query = queries[i];
    const FeatureSpec spec =
        make_feature_spec(schema, query.relation, !options.include_query_inverse);
    const double kge = plausibility(store, query.head, query.relation, query.tail);
    const std::vector<double> ideal = benchmark.ideal_relevances(query);
    for (std::size_t m = 0; m < plans.size(); ++m) {
      QueryRecord& record = report.records[i * plans.size() + m];
      record.query = query;
      record.method = plans[m].name;
      record.relation_category = to_string(schema.category(query.relation));
      record.kge_plausibility = kge;
      record.sibling_count = benchmark.sibling_count(query.head);
      std::vector<Path> paths;
      std::vector<double> values;
      if (plans[m].is_linklogic) {
        PerturbationConfig config = options.explain;
        config.seed = derive_seed(options.seed, 1000 + i);
        const Explanation explanation = explain(store, query, config, spec);
        record.n_paths = explanation.paths.size();
        record.fidelity = explanation.fidelity;
        for (const auto& ranked : explanation.paths) {
          paths.push_back(ranked.path);
          values.push_back(ranked.coefficient);
        }
      } else {
        HeuristicConfig config;
        config.threshold = plans[m].threshold;
        config.features_per_group = options.explain.features_per_group;
        config.candidate_fanout = options.explain.candidate_fanout;
        const auto kept = heuristic_paths(store, query, config, spec);
        record.n_paths = kept.size();
        for (const ScoredPath& scored : kept) {
          paths.push_back(scored.path);
          values.push_back(scored.score);
        }
      }
      std::vector<double> relevances;
      std::vector<std::string> categories;
      relevances.reserve(paths.size());
      categories.reserve(paths.size());
      for (const Path& path : paths) {
        const auto category = benchmark.category_of(query, path);
        relevances.push_back(category ? category_confidence(*category) : 0.0);
        categories.push_back(category ? to_string(*category) : "other");
      }
      for (std::size_t k = 1; k <= options.k_max; ++k) {
        record.ndcg[k] = ndcg_at_k(relevances, ideal, k);
      }
      store_ranking(record, std::move(paths), std::move(values), std::move(categories));
    }
  });

  report.aggregates = compute_aggregates(report);
  log_event("parents_sweep.done", {{"records", report.records.size()}});
  return report;
}

ExperimentReport run_tautology_experiment(const EmbeddingStore& store, const DatasetSplit& split,
                                          const RelationSchema& schema,
                                          const TautologyOptions& options) {
  options.explain.validate();
  const Benchmark benchmark = build_benchmark(split, schema, BenchmarkOptions{true});
  std::vector<Triple> queries;
  for (const Triple& query : benchmark.queries()) {
    if (benchmark.sibling_count(query.head) == 1) queries.push_back(query);
  }
  if (options.max_queries > 0 && queries.size() > options.max_queries) {
    queries.resize(options.max_queries);
  }
  log_event("tautology.start", {{"queries", queries.size()}});

  const auto summary = benchmark.summary();
  const auto& category_counts = summary.at("category_counts");
  const bool has_sibling_categories = category_counts.contains("sibling_edge") ||
                                      category_counts.contains("sibling_parent");

  ExperimentReport report;
  report.kind = "tautology";
  report.seed = options.seed;
  report.config = nlohmann::json{
      {"explain", perturbation_config_to_json(options.explain)},
      {"max_queries", options.max_queries},
      {"jobs", options.jobs},
      {"figure", has_sibling_categories ? "fig3b" : "fig3a"},
  };

  const std::pair<const char*, bool> variants[] = {{"with_query_inverse", false},
                                                   {"without_query_inverse", true}};
  report.records.resize(queries.size() * 2);

  parallel_for(queries.size(), options.jobs, [&](std::size_t i) {
    const Triple& query = queries[i];
    const double kge = plausibility(store, query.head, query.relation, query.tail);
    for (std::size_t v = 0; v < 2; ++v) {
      const auto& [variant_name, exclude] = variants[v];
      QueryRecord& record = report.records[i * 2 + v];
      record.query = query;
      record.method = "linklogic";
      record.variant = variant_name;
      record.relation_category = to_string(schema.category(query.relation));
      record.kge_plausibility = kge;
      record.sibling_count = benchmark.sibling_count(query.head);

      PerturbationConfig config = options.explain;
      config.seed = derive_seed(options.seed, 1000 + i);  // shared across variants
      const FeatureSpec spec = make_feature_spec(schema, query.relation, exclude);
      const Explanation explanation = explain(store, query, config, spec);
      record.n_paths = explanation.paths.size();
      record.fidelity = explanation.fidelity;

      std::vector<Path> paths;
      std::vector<double> values;
      std::vector<std::string> categories;
      for (const auto& ranked : explanation.paths) {
        const auto category = benchmark.category_of(query, ranked.path);
        categories.push_back(category ? to_string(*category) : "other");
        paths.push_back(ranked.path);
        values.push_back(ranked.coefficient);
      }
      store_ranking(record, std::move(paths), std::move(values), std::move(categories));
    }
  });

  report.aggregates = compute_aggregates(report);
  log_event("tautology.done", {{"records", report.records.size()}});
  return report;
}

}  // namespace linklogic
