#include "linklogic/train.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "linklogic/rng.hpp"

namespace linklogic {

void TrainingConfig::validate() const {
  if (hidden_dim == 0) throw ConfigError("hidden_dim must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (neg_sample_size == 0) throw ConfigError("neg_sample_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("lr must be positive");
  if (!(adversarial_temperature > 0.0)) {
    throw ConfigError("adversarial_temperature must be positive");
  }
  if (regularization_coef < 0.0) throw ConfigError("regularization_coef must be non-negative");
}

namespace {

double stable_sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + exp(x)) without overflow; -log(sigmoid(x)) == softplus(-x).
double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

std::vector<double>& slot(std::map<std::uint32_t, std::vector<double>>& grads, std::uint32_t id,
                          std::size_t dim) {
  auto [it, inserted] = grads.try_emplace(id);
  if (inserted) it->second.assign(dim, 0.0);
  return it->second;
}

// dL/dscore = factor; accumulates the ComplEx score gradient for one triple.
void accumulate_score_gradient(const EmbeddingStore& store, const Triple& t, double factor,
                               detail::GradientMap& g) {
  const std::size_t d = store.dim();
  const auto h_re = store.entity_re(t.head), h_im = store.entity_im(t.head);
  const auto r_re = store.relation_re(t.relation), r_im = store.relation_im(t.relation);
  const auto t_re = store.entity_re(t.tail), t_im = store.entity_im(t.tail);
  auto& gh_re = slot(g.ent_re, t.head, d);
  auto& gh_im = slot(g.ent_im, t.head, d);
  auto& gr_re = slot(g.rel_re, t.relation, d);
  auto& gr_im = slot(g.rel_im, t.relation, d);
  auto& gt_re = slot(g.ent_re, t.tail, d);
  auto& gt_im = slot(g.ent_im, t.tail, d);
  for (std::size_t i = 0; i < d; ++i) {
    gh_re[i] += factor * (r_re[i] * t_re[i] + r_im[i] * t_im[i]);
    gh_im[i] += factor * (r_re[i] * t_im[i] - r_im[i] * t_re[i]);
    gr_re[i] += factor * (h_re[i] * t_re[i] + h_im[i] * t_im[i]);
    gr_im[i] += factor * (h_re[i] * t_im[i] - h_im[i] * t_re[i]);
    gt_re[i] += factor * (r_re[i] * h_re[i] - r_im[i] * h_im[i]);
    gt_im[i] += factor * (r_re[i] * h_im[i] + r_im[i] * h_re[i]);
  }
}

double l3_penalty(std::span<const double> re, std::span<const double> im) {
  double sum = 0.0;
  for (const double x : re) sum += std::abs(x) * x * x;
  for (const double x : im) sum += std::abs(x) * x * x;
  return sum;
}

void l3_gradient(std::span<const double> v, double coef, std::vector<double>& grad) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    grad[i] += coef * 3.0 * std::abs(v[i]) * v[i];
  }
}

}  // namespace

namespace detail {

double example_loss(const EmbeddingStore& store, const Triple& positive,
                    std::span<const Triple> negatives, const TrainingConfig& config,
                    GradientMap* gradients) {
  const double s_pos = score_raw(store, positive.head, positive.relation, positive.tail);
  double loss = softplus(-s_pos);

  std::vector<double> neg_scores(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    neg_scores[i] = score_raw(store, negatives[i].head, negatives[i].relation, negatives[i].tail);
  }

  // Negative weights: uniform, or self-adversarial softmax over the negative
  // scores (weights treated as constants for the gradient).
  std::vector<double> weights(negatives.size(), 0.0);
  if (!negatives.empty()) {
    if (config.adversarial_sampling) {
      const double t = config.adversarial_temperature;
      const double m = *std::max_element(neg_scores.begin(), neg_scores.end());
      double z = 0.0;
      for (std::size_t i = 0; i < negatives.size(); ++i) {
        weights[i] = std::exp(t * (neg_scores[i] - m));
        z += weights[i];
      }
      for (double& w : weights) w /= z;
    } else {
      std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(negatives.size()));
    }
  }
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    loss += weights[i] * softplus(neg_scores[i]);
  }

  if (gradients) {
    accumulate_score_gradient(store, positive, stable_sigmoid(s_pos) - 1.0, *gradients);
    for (std::size_t i = 0; i < negatives.size(); ++i) {
      accumulate_score_gradient(store, negatives[i], weights[i] * stable_sigmoid(neg_scores[i]),
                                *gradients);
    }
  }

  if (config.regularization_coef > 0.0) {
    const double coef = config.regularization_coef;
    const std::size_t d = store.dim();
    std::vector<EntityId> entities{positive.head, positive.tail};
    for (const Triple& n : negatives) {
      entities.push_back(n.head);
      entities.push_back(n.tail);
    }
    std::sort(entities.begin(), entities.end());
    entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
    for (const EntityId e : entities) {
      loss += coef * l3_penalty(store.entity_re(e), store.entity_im(e));
      if (gradients) {
        l3_gradient(store.entity_re(e), coef, slot(gradients->ent_re, e, d));
        l3_gradient(store.entity_im(e), coef, slot(gradients->ent_im, e, d));
      }
    }
    loss += coef * l3_penalty(store.relation_re(positive.relation),
                              store.relation_im(positive.relation));
    if (gradients) {
      l3_gradient(store.relation_re(positive.relation), coef,
                  slot(gradients->rel_re, positive.relation, d));
      l3_gradient(store.relation_im(positive.relation), coef,
                  slot(gradients->rel_im, positive.relation, d));
    }
  }
  return loss;
}

}  // namespace detail

EmbeddingStore train(const KnowledgeGraph& graph, const TrainingConfig& config,
                     const TrainCallback& callback) {
  config.validate();
  const auto& triples = graph.triples();
  if (triples.empty()) {
    throw ConfigError("cannot train on an empty graph");
  }

  EmbeddingStore store(graph.num_entities(), graph.num_relations(), config.hidden_dim);
  Rng rng(config.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  for (auto* block : {&store.entity_re_data(), &store.entity_im_data(),
                      &store.relation_re_data(), &store.relation_im_data()}) {
    for (double& x : *block) {
      x = (2.0 * rng.uniform() - 1.0) * bound;
    }
  }

  const std::size_t n_entities = graph.num_entities();
  const std::size_t n_relations = graph.num_relations();
  // Corruptions that reproduce a training triple would push true facts down
  // (and self-adversarial weighting would focus on them, since they score
  // high), so they are redrawn. Bounded retries cover saturated (head,
  // relation) pairs where every entity is a true tail.
  const auto triple_key = [n_entities, n_relations](const Triple& t) {
    return (static_cast<std::uint64_t>(t.head) * n_relations + t.relation) * n_entities + t.tail;
  };
  std::unordered_set<std::uint64_t> true_triples;
  true_triples.reserve(triples.size());
  for (const Triple& t : triples) true_triples.insert(triple_key(t));

  detail::GradientMap grads;
  std::vector<Triple> negatives(config.neg_sample_size);

  for (std::size_t step = 1; step <= config.max_step; ++step) {
    double step_loss = 0.0;
    for (std::size_t b = 0; b < config.batch_size; ++b) {
      const Triple positive = triples[rng.uniform_index(triples.size())];
      const bool corrupt_head = rng.uniform_bool();
      for (Triple& neg : negatives) {
        for (int tries = 0; tries < 64; ++tries) {
          const auto e = static_cast<EntityId>(rng.uniform_index(n_entities));
          neg = corrupt_head ? Triple{e, positive.relation, positive.tail}
                             : Triple{positive.head, positive.relation, e};
          if (!true_triples.contains(triple_key(neg))) break;
        }
      }
      grads.ent_re.clear();
      grads.ent_im.clear();
      grads.rel_re.clear();
      grads.rel_im.clear();
      const double loss = detail::example_loss(store, positive, negatives, config, &grads);
      if (!std::isfinite(loss)) {
        throw TrainingError("training diverged: non-finite loss at step " + std::to_string(step));
      }
      step_loss += loss;

      bool finite = true;
      const auto apply = [&](std::span<double> param, const std::vector<double>& grad) {
        for (std::size_t i = 0; i < param.size(); ++i) {
          param[i] -= config.learning_rate * grad[i];
          finite = finite && std::isfinite(param[i]);
        }
      };
      for (const auto& [id, grad] : grads.ent_re) apply(store.entity_re(id), grad);
      for (const auto& [id, grad] : grads.ent_im) apply(store.entity_im(id), grad);
      for (const auto& [id, grad] : grads.rel_re) apply(store.relation_re(id), grad);
      for (const auto& [id, grad] : grads.rel_im) apply(store.relation_im(id), grad);
      if (!finite) {
        throw TrainingError("training diverged: non-finite parameter at step " +
                            std::to_string(step));
      }
    }
    if (callback && config.log_every > 0 &&
        (step % config.log_every == 0 || step == config.max_step)) {
      callback(step, step_loss / static_cast<double>(config.batch_size));
    }
  }
  return store;
}

MrrReport evaluate_mrr(const EmbeddingStore& store, std::span<const Triple> test,
                       const KnowledgeGraph& filter) {
  MrrReport report;
  double total = 0.0;
  std::map<RelationId, double> relation_total;
  const auto n_entities = static_cast<EntityId>(store.num_entities());

  for (const Triple& triple : test) {
    const double s_true = score_raw(store, triple.head, triple.relation, triple.tail);

    std::size_t tail_better = 0;
    for (EntityId e = 0; e < n_entities; ++e) {
      if (e == triple.tail) continue;
      if (filter.contains(Triple{triple.head, triple.relation, e})) continue;
      if (score_raw(store, triple.head, triple.relation, e) > s_true) ++tail_better;
    }
    std::size_t head_better = 0;
    for (EntityId e = 0; e < n_entities; ++e) {
      if (e == triple.head) continue;
      if (filter.contains(Triple{e, triple.relation, triple.tail})) continue;
      if (score_raw(store, e, triple.relation, triple.tail) > s_true) ++head_better;
    }

    const double rr = 1.0 / static_cast<double>(1 + tail_better) +
                      1.0 / static_cast<double>(1 + head_better);
    total += rr;
    relation_total[triple.relation] += rr;
    report.per_relation[triple.relation].count += 2;
  }

  report.count = 2 * test.size();
  report.overall = report.count == 0 ? 0.0 : total / static_cast<double>(report.count);
  for (auto& [relation, entry] : report.per_relation) {
    entry.mrr = relation_total[relation] / static_cast<double>(entry.count);
  }
  return report;
}

}  // namespace linklogic
