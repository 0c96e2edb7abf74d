#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "linklogic/embedding.hpp"
#include "linklogic/graph.hpp"
#include "linklogic/types.hpp"

namespace linklogic {

struct TrainingConfig {
  std::size_t hidden_dim = 400;
  std::size_t batch_size = 1000;
  std::size_t neg_sample_size = 200;
  double learning_rate = 0.1;
  std::size_t max_step = 50000;
  bool adversarial_sampling = true;
  double adversarial_temperature = 1.0;
  double regularization_coef = 2e-6;
  std::uint64_t seed = 0;
  // Steps between progress callbacks; 0 disables them.
  std::size_t log_every = 100;

  void validate() const;
};

// Called with (step, mean loss over the step's batch).
using TrainCallback = std::function<void(std::size_t, double)>;

// SGD on the logistic loss: positives sampled uniformly with replacement,
// each paired with neg_sample_size uniform corruptions of head or tail
// (chosen per positive with equal probability); corruptions that reproduce a
// training triple are redrawn. Optional self-adversarial weighting treats
// the softmax weights as constants. The L3 penalty
// (regularization_coef * sum |v|^3 over the example's distinct vectors) is
// applied with each example. Parameters start uniform in [-1/sqrt(d),
// +1/sqrt(d)]. Any non-finite value aborts with a TrainingError naming the
// step.
EmbeddingStore train(const KnowledgeGraph& graph, const TrainingConfig& config,
                     const TrainCallback& callback = {});

struct RelationMrr {
  double mrr = 0.0;
  std::size_t count = 0;  // ranks contributing (two per triple)
};

struct MrrReport {
  std::map<RelationId, RelationMrr> per_relation;
  double overall = 0.0;
  std::size_t count = 0;
};

// Filtered MRR: for each triple, rank the true head and the true tail against
// all entities, skipping candidates that form a known triple of the filter
// graph (other than the test triple itself). Rank = 1 + number of strictly
// better candidates.
MrrReport evaluate_mrr(const EmbeddingStore& store, std::span<const Triple> test,
                       const KnowledgeGraph& filter);

namespace detail {

// Per-example loss and gradient accumulation, exposed for gradient checking.
// Gradients are accumulated into sparse maps keyed by id; negative triples
// share the positive's relation.
struct GradientMap {
  std::map<EntityId, std::vector<double>> ent_re, ent_im;
  std::map<RelationId, std::vector<double>> rel_re, rel_im;
};

double example_loss(const EmbeddingStore& store, const Triple& positive,
                    std::span<const Triple> negatives, const TrainingConfig& config,
                    GradientMap* gradients);

}  // namespace detail

}  // namespace linklogic
