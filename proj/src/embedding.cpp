#include "linklogic/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linklogic {

EmbeddingStore::EmbeddingStore(std::size_t n_entities, std::size_t n_relations, std::size_t dim)
    : n_entities_(n_entities),
      n_relations_(n_relations),
      dim_(dim),
      ent_re_(n_entities * dim, 0.0),
      ent_im_(n_entities * dim, 0.0),
      rel_re_(n_relations * dim, 0.0),
      rel_im_(n_relations * dim, 0.0) {
  if (dim == 0) {
    throw ConfigError("embedding dimension must be positive");
  }
}

namespace {

void check_entity(std::size_t id, std::size_t count) {
  if (id >= count) {
    throw LookupError("entity id out of range: " + std::to_string(id));
  }
}

void check_relation(std::size_t id, std::size_t count) {
  if (id >= count) {
    throw LookupError("relation id out of range: " + std::to_string(id));
  }
}

}  // namespace

std::span<const double> EmbeddingStore::entity_re(EntityId id) const {
  check_entity(id, n_entities_);
  return {ent_re_.data() + std::size_t(id) * dim_, dim_};
}
std::span<const double> EmbeddingStore::entity_im(EntityId id) const {
  check_entity(id, n_entities_);
  return {ent_im_.data() + std::size_t(id) * dim_, dim_};
}
std::span<const double> EmbeddingStore::relation_re(RelationId id) const {
  check_relation(id, n_relations_);
  return {rel_re_.data() + std::size_t(id) * dim_, dim_};
}
std::span<const double> EmbeddingStore::relation_im(RelationId id) const {
  check_relation(id, n_relations_);
  return {rel_im_.data() + std::size_t(id) * dim_, dim_};
}

std::span<double> EmbeddingStore::entity_re(EntityId id) {
  check_entity(id, n_entities_);
  return {ent_re_.data() + std::size_t(id) * dim_, dim_};
}
std::span<double> EmbeddingStore::entity_im(EntityId id) {
  check_entity(id, n_entities_);
  return {ent_im_.data() + std::size_t(id) * dim_, dim_};
}
std::span<double> EmbeddingStore::relation_re(RelationId id) {
  check_relation(id, n_relations_);
  return {rel_re_.data() + std::size_t(id) * dim_, dim_};
}
std::span<double> EmbeddingStore::relation_im(RelationId id) {
  check_relation(id, n_relations_);
  return {rel_im_.data() + std::size_t(id) * dim_, dim_};
}

bool EmbeddingStore::all_finite() const {
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(ent_re_) && finite(ent_im_) && finite(rel_re_) && finite(rel_im_);
}

double score_raw(std::span<const double> h_re, std::span<const double> h_im,
                 std::span<const double> r_re, std::span<const double> r_im,
                 std::span<const double> t_re, std::span<const double> t_im) {
  double sum = 0.0;
  const std::size_t d = h_re.size();
  for (std::size_t i = 0; i < d; ++i) {
    sum += r_re[i] * (h_re[i] * t_re[i]);
    sum += r_re[i] * (h_im[i] * t_im[i]);
    sum += r_im[i] * (h_re[i] * t_im[i]);
    sum -= r_im[i] * (h_im[i] * t_re[i]);
  }
  return sum;
}

double score_raw(const EmbeddingStore& store, EntityId h, RelationId r, EntityId t) {
  return score_raw(store.entity_re(h), store.entity_im(h), store.relation_re(r),
                   store.relation_im(r), store.entity_re(t), store.entity_im(t));
}

double score_raw(const EmbeddingStore& store, std::span<const double> h_re,
                 std::span<const double> h_im, RelationId r, std::span<const double> t_re,
                 std::span<const double> t_im) {
  return score_raw(h_re, h_im, store.relation_re(r), store.relation_im(r), t_re, t_im);
}

double clamp_plausibility(double sigmoid_value) {
  return std::clamp(sigmoid_value, 1e-12, 1.0 - 1e-12);
}

double plausibility_from_score(double raw_score) {
  // Split by sign for numerical stability at large |raw_score|.
  const double f =
      raw_score >= 0.0 ? 1.0 / (1.0 + std::exp(-raw_score))
                       : std::exp(raw_score) / (1.0 + std::exp(raw_score));
  return clamp_plausibility(f);
}

double plausibility(const EmbeddingStore& store, EntityId h, RelationId r, EntityId t) {
  return plausibility_from_score(score_raw(store, h, r, t));
}

namespace {

std::vector<std::pair<EntityId, double>> top_k(std::vector<double> scores, std::size_t k) {
  const std::size_t n = scores.size();
  k = std::min(k, n);
  std::vector<EntityId> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&scores](EntityId a, EntityId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<std::pair<EntityId, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(ids[i], scores[ids[i]]);
  }
  return out;
}

}  // namespace

std::vector<std::pair<EntityId, double>> top_k_tails(const EmbeddingStore& store, EntityId h,
                                                     RelationId r, std::size_t k) {
  std::vector<double> scores(store.num_entities());
  for (EntityId t = 0; t < scores.size(); ++t) {
    scores[t] = score_raw(store, h, r, t);
  }
  return top_k(std::move(scores), k);
}

std::vector<std::pair<EntityId, double>> top_k_heads(const EmbeddingStore& store, RelationId r,
                                                     EntityId t, std::size_t k) {
  std::vector<double> scores(store.num_entities());
  for (EntityId h = 0; h < scores.size(); ++h) {
    scores[h] = score_raw(store, h, r, t);
  }
  return top_k(std::move(scores), k);
}

}  // namespace linklogic
