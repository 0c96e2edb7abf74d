#include "linklogic/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "linklogic/benchmark.hpp"
#include "linklogic/dataset.hpp"
#include "linklogic/embedding_io.hpp"
#include "linklogic/experiments.hpp"
#include "linklogic/explainer.hpp"
#include "linklogic/heuristic.hpp"
#include "linklogic/rng.hpp"
#include "linklogic/util.hpp"

namespace linklogic {

namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return std::string(text.substr(first, last - first + 1));
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "' expects a non-negative integer, got '" + value +
                      "'");
  }
  return out;
}

std::size_t parse_size_value(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_u64_value(key, value));
}

double parse_double_value(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "True" || value == "true" || value == "1") return true;
  if (value == "False" || value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "' expects True or False, got '" + value + "'");
}

std::uint64_t env_default_seed() {
  const char* raw = std::getenv("LINKLOGIC_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string value(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("LINKLOGIC_SEED must be a non-negative integer, got '" + value + "'");
  }
  return out;
}

std::size_t default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<std::size_t>(hw);
}

nlohmann::json histogram_json(const std::vector<EntityType>& types) {
  std::map<std::string, std::size_t> counts;
  for (const EntityType type : types) counts[to_string(type)] += 1;
  return nlohmann::json(counts);
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareArgs {
  std::string input;
  std::string out;
  bool fb14 = false;
  std::uint64_t seed = 0;
  SplitProportions proportions;
};

void cmd_prepare(const PrepareArgs& args) {
  const fs::path in_dir(args.input);
  if (!fs::is_directory(in_dir)) {
    throw ParseError("input directory not found: " + args.input);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt" || ext == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ParseError("no .txt or .tsv triple files in " + args.input);
  }

  auto vocab = std::make_shared<Vocabulary>();
  std::vector<Triple> pool;
  nlohmann::json source_files = nlohmann::json::array();
  for (const fs::path& file : files) {
    const auto triples = load_triples(file, *vocab);
    pool.insert(pool.end(), triples.begin(), triples.end());
    source_files.push_back(file.filename().string());
    log_event("prepare.loaded", {{"file", file.filename().string()}, {"triples", triples.size()}});
  }
  const std::size_t raw_count = pool.size();
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  const std::size_t duplicates = raw_count - pool.size();

  DatasetSplit split =
      random_split(std::static_pointer_cast<const Vocabulary>(vocab), std::move(pool),
                   args.proportions, args.seed);
  ComponentStats stats;
  split = filter_to_largest_component(split, &stats);
  log_event("prepare.component", {{"components", stats.components},
                                  {"kept_triples", stats.kept_triples},
                                  {"dropped_triples", stats.dropped_triples},
                                  {"kept_entities", stats.kept_entities}});

  std::size_t sibling_count = 0;
  if (args.fb14) {
    split = build_fb14(split, derive_seed(args.seed, 1), &sibling_count);
    log_event("prepare.siblings", {{"sibling_triples", sibling_count}});
  }

  const auto schema = RelationSchema::resolve(split.train.vocab());
  const KnowledgeGraph combined = combine_splits(split);
  auto types = assign_entity_types(combined, schema);
  const nlohmann::json type_histogram = histogram_json(types);
  split.train.set_entity_types(std::move(types));

  nlohmann::json manifest{
      {"seed", args.seed},
      {"proportions",
       {{"train", args.proportions.train},
        {"valid", args.proportions.valid},
        {"test", args.proportions.test}}},
      {"source_files", source_files},
      {"raw_triples", raw_count},
      {"duplicates_dropped", duplicates},
      {"component",
       {{"components", stats.components},
        {"kept_triples", stats.kept_triples},
        {"dropped_triples", stats.dropped_triples},
        {"kept_entities", stats.kept_entities},
        {"valid_dropped", stats.valid_dropped},
        {"test_dropped", stats.test_dropped}}},
      {"fb14", args.fb14},
      {"entities", split.train.vocab().entities().size()},
      {"relations", split.train.vocab().relations().size()},
      {"splits",
       {{"train", split.train.triples().size()},
        {"valid", split.valid.size()},
        {"test", split.test.size()}}},
      {"entity_type_histogram", type_histogram},
  };
  if (args.fb14) manifest["sibling_triples"] = sibling_count;

  save_dataset(args.out, split, manifest);
  log_event("prepare.done", {{"out", args.out},
                             {"train", split.train.triples().size()},
                             {"valid", split.valid.size()},
                             {"test", split.test.size()}});
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string data;
  std::string out;
  std::string config_file;
  std::size_t mrr_sample = 2000;
  // Flag overrides, keyed by config-file spelling; applied only when passed.
  std::map<std::string, std::string> overrides;
  std::vector<std::pair<std::string, CLI::Option*>> override_opts;
};

void cmd_train(const TrainArgs& args) {
  TrainingConfig config;
  config.seed = env_default_seed();
  if (!args.config_file.empty()) {
    const auto entries = parse_kv_config(read_file(args.config_file), args.config_file);
    for (const auto& [key, value] : entries) apply_training_entry(config, key, value);
  }
  for (const auto& [key, opt] : args.override_opts) {
    if (opt->count() > 0) apply_training_entry(config, key, args.overrides.at(key));
  }
  config.validate();

  const Dataset dataset = load_dataset(args.data);
  log_event("train.start", {{"triples", dataset.split.train.triples().size()},
                            {"entities", dataset.vocab->entities().size()},
                            {"relations", dataset.vocab->relations().size()},
                            {"config", training_config_to_json(config)}});

  std::string loss_csv = "step,loss\n";
  const auto started = std::chrono::steady_clock::now();
  const EmbeddingStore store =
      train(dataset.split.train, config, [&](std::size_t step, double loss) {
        loss_csv += std::to_string(step) + "," + format_double(loss) + "\n";
        log_event("train.progress", {{"step", step}, {"loss", loss}});
      });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  save_embeddings(args.out, store, training_config_to_json(config),
                  dataset.vocab->name_hash());
  fs::path loss_path(args.out);
  loss_path += ".loss.csv";
  write_file(loss_path, loss_csv);
  log_event("train.saved", {{"out", args.out}, {"seconds", seconds}});

  if (args.mrr_sample > 0 && !dataset.split.test.empty()) {
    std::vector<Triple> test = dataset.split.test;
    if (test.size() > args.mrr_sample) {
      Rng rng(derive_seed(config.seed, 0xE7A1));
      rng.shuffle(test);
      test.resize(args.mrr_sample);
      std::sort(test.begin(), test.end());
    }
    const KnowledgeGraph filter = combine_splits(dataset.split);
    const MrrReport report = evaluate_mrr(store, test, filter);
    nlohmann::json per_relation = nlohmann::json::object();
    for (const auto& [relation, entry] : report.per_relation) {
      per_relation[dataset.vocab->relation_name(relation)] =
          nlohmann::json{{"mrr", entry.mrr}, {"count", entry.count}};
    }
    const nlohmann::json metrics{{"mrr", report.overall},
                                 {"rank_count", report.count},
                                 {"test_sampled", test.size()},
                                 {"test_total", dataset.split.test.size()},
                                 {"per_relation", per_relation}};
    fs::path metrics_path(args.out);
    metrics_path += ".metrics.json";
    write_file(metrics_path, metrics.dump(2) + "\n");
    log_event("train.mrr", {{"mrr", report.overall}, {"test_sampled", test.size()}});
  }
}

// ---------------------------------------------------------------------------
// explain

struct ExplainArgs {
  std::string embeddings;
  std::string data;
  std::string query;
  std::string method = "linklogic";
  std::string out;
  std::string scatter_csv;
  bool exclude_query_inverse = false;
  PerturbationConfig explain;
  double threshold = 0.9;
  bool whole_path_mean = false;
};

Triple parse_query(const std::string& text, const Vocabulary& vocab) {
  std::istringstream stream(text);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(token);
  if (tokens.size() != 3) {
    throw ParseError("--query expects \"head relation tail\", got '" + text + "'");
  }
  const auto head = vocab.entities().find(tokens[0]);
  if (!head) throw LookupError("unknown entity '" + tokens[0] + "'");
  const auto relation = vocab.relations().find(tokens[1]);
  if (!relation) throw LookupError("unknown relation '" + tokens[1] + "'");
  const auto tail = vocab.entities().find(tokens[2]);
  if (!tail) throw LookupError("unknown entity '" + tokens[2] + "'");
  return Triple{*head, *relation, *tail};
}

void cmd_explain(const ExplainArgs& args) {
  const Dataset dataset = load_dataset(args.data);
  const auto loaded = load_embeddings(args.embeddings, dataset.vocab.get());
  const Triple query = parse_query(args.query, *dataset.vocab);
  const auto schema = RelationSchema::resolve(*dataset.vocab);
  const FeatureSpec spec =
      make_feature_spec(schema, query.relation, args.exclude_query_inverse);

  const bool run_linklogic = args.method == "linklogic" || args.method == "both";
  const bool run_heuristic = args.method == "heuristic" || args.method == "both";

  nlohmann::json output;
  output["query"] = nlohmann::json{
      {"head", dataset.vocab->entity_name(query.head)},
      {"relation", dataset.vocab->relation_name(query.relation)},
      {"tail", dataset.vocab->entity_name(query.tail)},
      {"kge_plausibility",
       plausibility(loaded.store, query.head, query.relation, query.tail)},
  };
  output["config"] = nlohmann::json{
      {"method", args.method},
      {"exclude_query_inverse", args.exclude_query_inverse},
      {"alpha", args.explain.alpha},
      {"n_perturbations", args.explain.n_perturbations},
      {"neighbor_k", args.explain.neighbor_k},
      {"features_per_group", args.explain.features_per_group},
      {"lambda", args.explain.lambda},
      {"candidate_fanout", args.explain.candidate_fanout},
      {"holdout_fraction", args.explain.holdout_fraction},
      {"seed", args.explain.seed},
      {"threshold", args.threshold},
      {"whole_path_mean", args.whole_path_mean},
  };

  const auto started = std::chrono::steady_clock::now();
  if (run_linklogic) {
    const Explanation explanation = explain(loaded.store, query, args.explain, spec);
    output["linklogic"] = explanation_to_json(explanation, *dataset.vocab);
    if (!args.scatter_csv.empty()) {
      std::string csv = "label,prediction\n";
      for (const auto& [label, prediction] : explanation.diagnostics.holdout_pairs) {
        csv += format_double(label) + "," + format_double(prediction) + "\n";
      }
      write_file(args.scatter_csv, csv);
    }
  } else if (!args.scatter_csv.empty()) {
    throw ConfigError("--scatter-csv requires the linklogic method");
  }
  if (run_heuristic) {
    HeuristicConfig config;
    config.threshold = args.threshold;
    config.whole_path_mean = args.whole_path_mean;
    config.features_per_group = args.explain.features_per_group;
    config.candidate_fanout = args.explain.candidate_fanout;
    const auto paths = heuristic_paths(loaded.store, query, config, spec);
    output["heuristic"] = heuristic_to_json(query, paths, *dataset.vocab);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const std::string text = output.dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_file(args.out, text);
  }
  log_event("explain.done", {{"seconds", seconds}});
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkArgs {
  std::string data;
  std::string out;
  bool include_query_inverse = false;
};

void cmd_benchmark(const BenchmarkArgs& args) {
  const Dataset dataset = load_dataset(args.data);
  const auto schema = RelationSchema::resolve(*dataset.vocab);
  const Benchmark benchmark =
      build_benchmark(dataset.split, schema, BenchmarkOptions{args.include_query_inverse});

  fs::create_directories(args.out);
  const fs::path out_dir(args.out);
  write_file(out_dir / "benchmark.jsonl", benchmark_to_jsonl(benchmark, *dataset.vocab));
  const nlohmann::json summary = benchmark.summary();
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  std::vector<std::pair<std::size_t, std::size_t>> histogram;
  for (const auto& [key, count] : summary.at("paths_per_query_histogram").items()) {
    histogram.emplace_back(std::stoul(key), count.get<std::size_t>());
  }
  std::sort(histogram.begin(), histogram.end());
  std::string csv = "paths_per_query,n_queries\n";
  for (const auto& [paths, count] : histogram) {
    csv += std::to_string(paths) + "," + std::to_string(count) + "\n";
  }
  write_file(out_dir / "histogram.csv", csv);

  log_event("benchmark.done", {{"queries", benchmark.queries().size()},
                               {"entries", benchmark.entries().size()},
                               {"out", args.out}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string kind;
  std::string data;
  std::string embeddings;
  std::string out;
  std::size_t jobs = default_jobs();
  std::uint64_t seed = 0;
  PerturbationConfig explain;
  std::vector<double> thresholds{0.9, 0.95};
  bool no_linklogic = false;
  std::size_t per_relation = 100;
  bool exclude_query_inverse = false;
  bool include_query_inverse = false;
  std::size_t k_max = 7;
  std::size_t max_queries = 0;
};

void cmd_sweep(const SweepArgs& args) {
  const Dataset dataset = load_dataset(args.data);
  const auto loaded = load_embeddings(args.embeddings, dataset.vocab.get());
  const auto schema = RelationSchema::resolve(*dataset.vocab);

  ExperimentReport report;
  if (args.kind == "truth") {
    KnowledgeGraph combined = combine_splits(dataset.split);
    if (dataset.split.train.has_entity_types()) {
      combined.set_entity_types(dataset.split.train.entity_types());
    } else {
      combined.set_entity_types(assign_entity_types(combined, schema));
    }
    TruthSweepOptions options;
    options.explain = args.explain;
    options.thresholds = args.thresholds;
    options.run_linklogic = !args.no_linklogic;
    options.per_relation = args.per_relation;
    options.exclude_query_inverse = args.exclude_query_inverse;
    options.jobs = args.jobs;
    options.seed = args.seed;
    report = run_truth_sweep(loaded.store, combined, schema, options);
  } else if (args.kind == "parents") {
    ParentsSweepOptions options;
    options.explain = args.explain;
    options.thresholds = args.thresholds;
    options.run_linklogic = !args.no_linklogic;
    options.include_query_inverse = args.include_query_inverse;
    options.k_max = args.k_max;
    options.max_queries = args.max_queries;
    options.jobs = args.jobs;
    options.seed = args.seed;
    report = run_parents_sweep(loaded.store, dataset.split, schema, options);
  } else {
    TautologyOptions options;
    options.explain = args.explain;
    options.max_queries = args.max_queries;
    options.jobs = args.jobs;
    options.seed = args.seed;
    report = run_tautology_experiment(loaded.store, dataset.split, schema, options);
  }

  fs::create_directories(args.out);
  const fs::path out_dir(args.out);
  write_file(out_dir / "report.json", report.to_json(*dataset.vocab).dump(2) + "\n");
  for (const auto& [name, content] : report_csvs(report, *dataset.vocab)) {
    write_file(out_dir / name, content);
  }
  log_event("sweep.done",
            {{"kind", args.kind}, {"records", report.records.size()}, {"out", args.out}});
}

void add_explain_options(CLI::App* cmd, PerturbationConfig& config) {
  cmd->add_option("--alpha", config.alpha, "Perturbation scale multiplier");
  cmd->add_option("--n-perturbations", config.n_perturbations, "Perturbed query copies");
  cmd->add_option("--neighbor-k", config.neighbor_k, "Sigma neighborhood fan-out");
  cmd->add_option("--features-per-group", config.features_per_group,
                  "Paths kept per relation group");
  cmd->add_option("--lambda", config.lambda, "Lasso penalty");
  cmd->add_option("--candidate-fanout", config.candidate_fanout,
                  "Entities per (anchor, relation, direction)");
  cmd->add_option("--holdout-fraction", config.holdout_fraction,
                  "Fraction of rows held out for fidelity");
}

}  // namespace

std::map<std::string, std::string> parse_kv_config(const std::string& text,
                                                   const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

void apply_training_entry(TrainingConfig& config, const std::string& key,
                          const std::string& value) {
  if (key == "model_name") {
    if (value != "ComplEx") {
      throw ConfigError("model_name must be ComplEx, got '" + value + "'");
    }
  } else if (key == "batch_size") {
    config.batch_size = parse_size_value(key, value);
  } else if (key == "neg_sample_size") {
    config.neg_sample_size = parse_size_value(key, value);
  } else if (key == "hidden_dim") {
    config.hidden_dim = parse_size_value(key, value);
  } else if (key == "lr") {
    config.learning_rate = parse_double_value(key, value);
  } else if (key == "max_step") {
    config.max_step = parse_size_value(key, value);
  } else if (key == "batch_size_eval") {
    parse_size_value(key, value);  // accepted for config-file compatibility
  } else if (key == "neg_adversarial_sampling") {
    config.adversarial_sampling = parse_bool_value(key, value);
  } else if (key == "regularization_coef") {
    config.regularization_coef = parse_double_value(key, value);
  } else if (key == "seed") {
    config.seed = parse_u64_value(key, value);
  } else if (key == "log_every") {
    config.log_every = parse_size_value(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

nlohmann::json training_config_to_json(const TrainingConfig& config) {
  return nlohmann::json{
      {"model_name", "ComplEx"},
      {"batch_size", config.batch_size},
      {"neg_sample_size", config.neg_sample_size},
      {"hidden_dim", config.hidden_dim},
      {"lr", config.learning_rate},
      {"max_step", config.max_step},
      {"neg_adversarial_sampling", config.adversarial_sampling},
      {"regularization_coef", config.regularization_coef},
      {"seed", config.seed},
      {"log_every", config.log_every},
  };
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Path-based explanations for knowledge-graph-embedding link predictions"};
  app.require_subcommand(1);

  try {
    const std::uint64_t default_seed = env_default_seed();

    auto prepare_args = std::make_shared<PrepareArgs>();
    prepare_args->seed = default_seed;
    auto* prepare = app.add_subcommand("prepare", "Split raw triples into a dataset bundle");
    prepare->add_option("--input", prepare_args->input, "Directory of raw .txt/.tsv triple files")
        ->required();
    prepare->add_option("--out", prepare_args->out, "Output dataset directory")->required();
    prepare->add_flag("--fb14", prepare_args->fb14, "Add inferred sibling triples");
    prepare->add_option("--seed", prepare_args->seed, "Split seed");
    prepare->add_option("--train-frac", prepare_args->proportions.train, "Train proportion");
    prepare->add_option("--valid-frac", prepare_args->proportions.valid, "Valid proportion");
    prepare->add_option("--test-frac", prepare_args->proportions.test, "Test proportion");
    prepare->callback([prepare_args] { cmd_prepare(*prepare_args); });

    auto train_args = std::make_shared<TrainArgs>();
    auto* train_cmd = app.add_subcommand("train", "Train embeddings on a dataset bundle");
    train_cmd->add_option("--data", train_args->data, "Dataset directory")->required();
    train_cmd->add_option("--out", train_args->out, "Output embedding file")->required();
    train_cmd->add_option("--config", train_args->config_file, "key=value training config file");
    train_cmd->add_option("--mrr-sample", train_args->mrr_sample,
                          "Test triples sampled for MRR (0 disables)");
    const std::vector<std::pair<std::string, std::string>> knob_flags = {
        {"--model-name", "model_name"},
        {"--batch-size", "batch_size"},
        {"--neg-sample-size", "neg_sample_size"},
        {"--hidden-dim", "hidden_dim"},
        {"--lr", "lr"},
        {"--max-step", "max_step"},
        {"--neg-adversarial-sampling", "neg_adversarial_sampling"},
        {"--regularization-coef", "regularization_coef"},
        {"--seed", "seed"},
        {"--log-every", "log_every"},
    };
    for (const auto& [flag, key] : knob_flags) {
      auto* opt = train_cmd->add_option(flag, train_args->overrides[key],
                                        "Overrides config key " + key);
      train_args->override_opts.emplace_back(key, opt);
    }
    train_cmd->callback([train_args] { cmd_train(*train_args); });

    auto explain_args = std::make_shared<ExplainArgs>();
    explain_args->explain.seed = default_seed;
    auto* explain_cmd = app.add_subcommand("explain", "Explain one prediction");
    explain_cmd->add_option("--embeddings", explain_args->embeddings, "Embedding file")
        ->required();
    explain_cmd->add_option("--data", explain_args->data, "Dataset directory")->required();
    explain_cmd->add_option("--query", explain_args->query, "\"head relation tail\"")->required();
    explain_cmd->add_option("--method", explain_args->method, "linklogic, heuristic, or both")
        ->check(CLI::IsMember({"linklogic", "heuristic", "both"}));
    explain_cmd->add_flag("--exclude-query-inverse", explain_args->exclude_query_inverse,
                          "Drop the tautological inverse path from the feature pool");
    add_explain_options(explain_cmd, explain_args->explain);
    explain_cmd->add_option("--seed", explain_args->explain.seed, "Perturbation seed");
    explain_cmd->add_option("--threshold", explain_args->threshold,
                            "Heuristic plausibility threshold");
    explain_cmd->add_flag("--whole-path-mean", explain_args->whole_path_mean,
                          "Heuristic thresholds the mean hop plausibility");
    explain_cmd->add_option("--out", explain_args->out, "Write the JSON here instead of stdout");
    explain_cmd->add_option("--scatter-csv", explain_args->scatter_csv,
                            "Write holdout (label, prediction) pairs as CSV");
    explain_cmd->callback([explain_args] { cmd_explain(*explain_args); });

    auto benchmark_args = std::make_shared<BenchmarkArgs>();
    auto* benchmark_cmd =
        app.add_subcommand("benchmark", "Build the parent-query path benchmark");
    benchmark_cmd->add_option("--data", benchmark_args->data, "Dataset directory")->required();
    benchmark_cmd->add_option("--out", benchmark_args->out, "Output directory")->required();
    benchmark_cmd->add_flag("--include-query-inverse", benchmark_args->include_query_inverse,
                            "Keep the tautological inverse entries");
    benchmark_cmd->callback([benchmark_args] { cmd_benchmark(*benchmark_args); });

    auto sweep_args = std::make_shared<SweepArgs>();
    sweep_args->seed = default_seed;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment sweep");
    sweep_cmd->add_option("kind", sweep_args->kind, "truth, parents, or tautology")
        ->required()
        ->check(CLI::IsMember({"truth", "parents", "tautology"}));
    sweep_cmd->add_option("--data", sweep_args->data, "Dataset directory")->required();
    sweep_cmd->add_option("--embeddings", sweep_args->embeddings, "Embedding file")->required();
    sweep_cmd->add_option("--out", sweep_args->out, "Output directory")->required();
    sweep_cmd->add_option("--jobs", sweep_args->jobs, "Per-query worker threads");
    sweep_cmd->add_option("--seed", sweep_args->seed, "Sweep seed");
    add_explain_options(sweep_cmd, sweep_args->explain);
    sweep_cmd->add_option("--thresholds", sweep_args->thresholds, "Heuristic thresholds")
        ->delimiter(',');
    sweep_cmd->add_flag("--no-linklogic", sweep_args->no_linklogic,
                        "Run only the heuristic methods");
    sweep_cmd->add_option("--per-relation", sweep_args->per_relation,
                          "True triples sampled per relation (truth sweep)");
    sweep_cmd->add_flag("--exclude-query-inverse", sweep_args->exclude_query_inverse,
                        "Drop the inverse path from features (truth sweep)");
    sweep_cmd->add_flag("--include-query-inverse", sweep_args->include_query_inverse,
                        "Keep inverse entries in benchmark and features (parents sweep)");
    sweep_cmd->add_option("--k-max", sweep_args->k_max, "Largest NDCG cutoff (parents sweep)");
    sweep_cmd->add_option("--max-queries", sweep_args->max_queries,
                          "Cap on benchmark queries (0 = all)");
    sweep_cmd->callback([sweep_args] { cmd_sweep(*sweep_args); });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace linklogic
