#pragma once

#include <vector>

#include "linklogic/embedding.hpp"
#include "linklogic/explainer.hpp"
#include "linklogic/path.hpp"

namespace linklogic {

// Plausible-paths baseline: same candidate pool as the explainer, kept paths
// are those whose hop plausibilities clear the threshold, ranked by path
// score. No surrogate model, so no fidelity.
struct HeuristicConfig {
  double threshold = 0.9;
  // false: every hop must clear the threshold; true: the mean across hops.
  bool whole_path_mean = false;
  std::size_t features_per_group = 20;
  std::size_t candidate_fanout = 50;

  void validate() const;
};

std::vector<ScoredPath> heuristic_paths(const EmbeddingStore& store, const Triple& query,
                                        const HeuristicConfig& config,
                                        const FeatureSpec& spec = {});

nlohmann::json heuristic_to_json(const Triple& query, const std::vector<ScoredPath>& paths,
                                 const Vocabulary& vocab);

}  // namespace linklogic
