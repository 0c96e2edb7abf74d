#include "linklogic/heuristic.hpp"

#include <algorithm>
#include <cmath>

namespace linklogic {

void HeuristicConfig::validate() const {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    throw ConfigError("heuristic threshold must be in [0, 1]");
  }
  if (features_per_group == 0) throw ConfigError("features_per_group must be positive");
  if (candidate_fanout == 0) throw ConfigError("candidate_fanout must be positive");
}

std::vector<ScoredPath> heuristic_paths(const EmbeddingStore& store, const Triple& query,
                                        const HeuristicConfig& config, const FeatureSpec& spec) {
  config.validate();
  PerturbationConfig pool;
  pool.features_per_group = config.features_per_group;
  pool.candidate_fanout = config.candidate_fanout;
  std::vector<ScoredPath> candidates = select_paths(store, query, pool, spec);

  std::vector<ScoredPath> kept;
  kept.reserve(candidates.size());
  for (ScoredPath& candidate : candidates) {
    const Path& path = candidate.path;
    double min_f = 1.0, sum_f = 0.0;
    for (std::size_t hop = 0; hop < path.length(); ++hop) {
      const double f = plausibility(store, path.entities[hop], path.relations[hop],
                                    path.entities[hop + 1]);
      min_f = std::min(min_f, f);
      sum_f += f;
    }
    const double gate =
        config.whole_path_mean ? sum_f / static_cast<double>(path.length()) : min_f;
    if (gate >= config.threshold) {
      kept.push_back(std::move(candidate));
    }
  }
  // select_paths already orders by (score desc, path); filtering preserves it.
  return kept;
}

nlohmann::json heuristic_to_json(const Triple& query, const std::vector<ScoredPath>& paths,
                                 const Vocabulary& vocab) {
  nlohmann::json out_paths = nlohmann::json::array();
  for (const ScoredPath& scored : paths) {
    nlohmann::json entities = nlohmann::json::array();
    for (const EntityId e : scored.path.entities) entities.push_back(vocab.entity_name(e));
    nlohmann::json relations = nlohmann::json::array();
    for (const RelationId r : scored.path.relations) relations.push_back(vocab.relation_name(r));
    out_paths.push_back(nlohmann::json{{"entities", entities},
                                       {"relations", relations},
                                       {"role", to_string(scored.role)},
                                       {"score", scored.score}});
  }
  return nlohmann::json{
      {"query",
       {{"head", vocab.entity_name(query.head)},
        {"relation", vocab.relation_name(query.relation)},
        {"tail", vocab.entity_name(query.tail)}}},
      {"paths", out_paths},
      {"n_paths", paths.size()},
      {"fidelity_r2", nullptr},
  };
}

}  // namespace linklogic
