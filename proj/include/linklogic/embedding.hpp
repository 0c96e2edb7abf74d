#pragma once

#include <span>
#include <utility>
#include <vector>

#include "linklogic/types.hpp"

namespace linklogic {

// Complex embeddings stored as separate real/imaginary arrays, row-major per
// id. dim is the complex dimension, so each vector has 2*dim real components.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  EmbeddingStore(std::size_t n_entities, std::size_t n_relations, std::size_t dim);

  std::size_t num_entities() const { return n_entities_; }
  std::size_t num_relations() const { return n_relations_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> entity_re(EntityId id) const;
  std::span<const double> entity_im(EntityId id) const;
  std::span<const double> relation_re(RelationId id) const;
  std::span<const double> relation_im(RelationId id) const;

  std::span<double> entity_re(EntityId id);
  std::span<double> entity_im(EntityId id);
  std::span<double> relation_re(RelationId id);
  std::span<double> relation_im(RelationId id);

  bool all_finite() const;

  // Raw storage, for serialization.
  const std::vector<double>& entity_re_data() const { return ent_re_; }
  const std::vector<double>& entity_im_data() const { return ent_im_; }
  const std::vector<double>& relation_re_data() const { return rel_re_; }
  const std::vector<double>& relation_im_data() const { return rel_im_; }
  std::vector<double>& entity_re_data() { return ent_re_; }
  std::vector<double>& entity_im_data() { return ent_im_; }
  std::vector<double>& relation_re_data() { return rel_re_; }
  std::vector<double>& relation_im_data() { return rel_im_; }

 private:
  std::size_t n_entities_ = 0;
  std::size_t n_relations_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> ent_re_, ent_im_, rel_re_, rel_im_;
};

// Re<h, r, conj(t)> expanded over components. Each term multiplies the
// relation component by the (head*tail) product so that swapping h and t with
// a zero-imaginary relation reproduces the exact same floating-point value.
double score_raw(std::span<const double> h_re, std::span<const double> h_im,
                 std::span<const double> r_re, std::span<const double> r_im,
                 std::span<const double> t_re, std::span<const double> t_im);

double score_raw(const EmbeddingStore& store, EntityId h, RelationId r, EntityId t);

// Perturbed endpoints: raw head/tail vectors with a stored relation.
double score_raw(const EmbeddingStore& store, std::span<const double> h_re,
                 std::span<const double> h_im, RelationId r, std::span<const double> t_re,
                 std::span<const double> t_im);

// Logistic sigmoid of the raw score, clamped away from exact 0 and 1 so
// -log(1 - f) stays finite.
double clamp_plausibility(double sigmoid_value);
double plausibility_from_score(double raw_score);
double plausibility(const EmbeddingStore& store, EntityId h, RelationId r, EntityId t);

// Top k entities by raw score (descending; ties broken by ascending id).
// k is clamped to the entity count.
std::vector<std::pair<EntityId, double>> top_k_tails(const EmbeddingStore& store, EntityId h,
                                                     RelationId r, std::size_t k);
std::vector<std::pair<EntityId, double>> top_k_heads(const EmbeddingStore& store, RelationId r,
                                                     EntityId t, std::size_t k);

}  // namespace linklogic
