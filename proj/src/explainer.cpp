#include "linklogic/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "linklogic/lasso.hpp"
#include "linklogic/metrics.hpp"
#include "linklogic/rng.hpp"

namespace linklogic {

const char* to_string(PathRole role) {
  switch (role) {
    case PathRole::HeadOneHop: return "head_one_hop";
    case PathRole::TailOneHop: return "tail_one_hop";
    case PathRole::BridgeTwoHop: return "bridge_two_hop";
  }
  return "head_one_hop";
}

void PerturbationConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be finite and non-negative");
  }
  if (n_perturbations < 10) {
    throw ConfigError("n_perturbations must be at least 10");
  }
  if (neighbor_k == 0) throw ConfigError("neighbor_k must be positive");
  if (features_per_group == 0) throw ConfigError("features_per_group must be positive");
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and non-negative");
  }
  if (candidate_fanout == 0) throw ConfigError("candidate_fanout must be positive");
  if (!(holdout_fraction > 0.0) || !(holdout_fraction < 0.5)) {
    throw ConfigError("holdout_fraction must be in (0, 0.5)");
  }
}

bool FeatureSpec::excluded(const Path& path, PathRole role, const Triple& query) const {
  if (exclude_query_inverse && inverse_relation && path.length() == 1 &&
      path.entities.front() == query.tail && path.entities.back() == query.head &&
      path.relations.front() == *inverse_relation) {
    return true;
  }
  for (const Pattern& pattern : exclusions) {
    const bool relation_hit =
        !pattern.relation ||
        std::find(path.relations.begin(), path.relations.end(), *pattern.relation) !=
            path.relations.end();
    const bool role_hit = !pattern.role || *pattern.role == role;
    if (relation_hit && role_hit) return true;
  }
  return false;
}

FeatureSpec make_feature_spec(const RelationSchema& schema, RelationId query_relation,
                              bool exclude_query_inverse) {
  FeatureSpec spec;
  spec.exclude_query_inverse = exclude_query_inverse;
  spec.inverse_relation = schema.inverse(query_relation);
  return spec;
}

namespace {

double sigma_one_side(const EmbeddingStore& store, EntityId anchor, RelationId relation,
                      std::size_t k, bool anchor_is_head) {
  // First ring from the anchor's own slot, second ring from the opposite
  // slot of each ring-1 entity; distances accumulate over all 2*dim real
  // components of every ring-2 vector (with multiplicity).
  const auto ring1 = anchor_is_head ? top_k_tails(store, anchor, relation, k)
                                    : top_k_heads(store, relation, anchor, k);
  const auto a_re = store.entity_re(anchor);
  const auto a_im = store.entity_im(anchor);
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& [e1, s1] : ring1) {
    const auto ring2 = anchor_is_head ? top_k_heads(store, relation, e1, k)
                                      : top_k_tails(store, e1, relation, k);
    for (const auto& [e2, s2] : ring2) {
      const auto n_re = store.entity_re(e2);
      const auto n_im = store.entity_im(e2);
      for (std::size_t c = 0; c < store.dim(); ++c) {
        const double dr = n_re[c] - a_re[c];
        const double di = n_im[c] - a_im[c];
        sum_sq += dr * dr + di * di;
      }
      ++count;
    }
  }
  if (count == 0) return 0.0;
  return std::sqrt(sum_sq / (static_cast<double>(count) * 2.0 * static_cast<double>(store.dim())));
}

}  // namespace

SigmaResult compute_sigmas(const EmbeddingStore& store, const Triple& query, std::size_t k) {
  if (k == 0) throw ConfigError("neighbor_k must be positive");
  SigmaResult result;
  result.sigma_head = sigma_one_side(store, query.head, query.relation, k, true);
  result.sigma_tail = sigma_one_side(store, query.tail, query.relation, k, false);
  return result;
}

PerturbedQueries perturb_queries(const EmbeddingStore& store, const Triple& query,
                                 double sigma_head, double sigma_tail, double alpha,
                                 std::size_t n, std::uint64_t seed) {
  const std::size_t d = store.dim();
  PerturbedQueries out{Matrix(n, d), Matrix(n, d), Matrix(n, d), Matrix(n, d)};
  const auto h_re = store.entity_re(query.head), h_im = store.entity_im(query.head);
  const auto t_re = store.entity_re(query.tail), t_im = store.entity_im(query.tail);
  Rng rng(seed);
  const double head_scale = alpha * sigma_head;
  const double tail_scale = alpha * sigma_tail;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) out.head_re(i, c) = h_re[c] + head_scale * rng.normal();
    for (std::size_t c = 0; c < d; ++c) out.head_im(i, c) = h_im[c] + head_scale * rng.normal();
    for (std::size_t c = 0; c < d; ++c) out.tail_re(i, c) = t_re[c] + tail_scale * rng.normal();
    for (std::size_t c = 0; c < d; ++c) out.tail_im(i, c) = t_im[c] + tail_scale * rng.normal();
  }
  return out;
}

namespace {

double hop_value(double raw_score) {
  return -std::log1p(-plausibility_from_score(raw_score));
}

// Group key: relation sequence of the path. One-hop groups pool both anchors
// and directions of a relation; bridge groups pool both orientations of an
// ordered relation pair.
using GroupKey = std::vector<RelationId>;

struct Candidate {
  Path path;
  PathRole role;
  double score;
};

bool candidate_order(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.path < b.path;
}

}  // namespace

std::vector<ScoredPath> select_paths(const EmbeddingStore& store, const Triple& query,
                                     const PerturbationConfig& config, const FeatureSpec& spec) {
  if (config.candidate_fanout == 0 || config.features_per_group == 0) {
    throw ConfigError("candidate_fanout and features_per_group must be positive");
  }
  const EntityId h = query.head;
  const EntityId t = query.tail;
  const std::size_t n_relations = store.num_relations();
  const Path query_path{{h, t}, {query.relation}};

  // Path -> candidate; first generation wins (fixed order: head anchor, tail
  // anchor, then bridges), so roles are deterministic.
  std::map<Path, Candidate> seen;
  std::vector<EntityId> pool;

  const auto add_candidate = [&seen](Path path, PathRole role, double score) {
    auto it = seen.find(path);
    if (it == seen.end()) {
      // Key copied before the value steals `path`; aliasing the two emplace
      // arguments would leave the key moved-from on some evaluation orders.
      Path key = path;
      seen.emplace(std::move(key), Candidate{std::move(path), role, score});
    }
  };

  const std::pair<EntityId, PathRole> anchors[] = {{h, PathRole::HeadOneHop},
                                                   {t, PathRole::TailOneHop}};
  for (const auto& [anchor, role] : anchors) {
    for (RelationId r = 0; r < n_relations; ++r) {
      for (const auto& [e, s] : top_k_tails(store, anchor, r, config.candidate_fanout)) {
        if (e == anchor) continue;
        pool.push_back(e);
        Path path{{anchor, e}, {r}};
        if (path == query_path) continue;
        add_candidate(std::move(path), role, hop_value(s));
      }
      for (const auto& [e, s] : top_k_heads(store, r, anchor, config.candidate_fanout)) {
        if (e == anchor) continue;
        pool.push_back(e);
        Path path{{e, anchor}, {r}};
        if (path == query_path) continue;
        add_candidate(std::move(path), role, hop_value(s));
      }
    }
  }

  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::erase_if(pool, [&](EntityId e) { return e == h || e == t; });

  if (!pool.empty() && n_relations > 0) {
    // Hop plausibility tables over the pool; bridges only combine these.
    Matrix from_h(n_relations, pool.size()), to_t(n_relations, pool.size());
    Matrix from_t(n_relations, pool.size()), to_h(n_relations, pool.size());
    for (RelationId r = 0; r < n_relations; ++r) {
      for (std::size_t x = 0; x < pool.size(); ++x) {
        from_h(r, x) = hop_value(score_raw(store, h, r, pool[x]));
        to_t(r, x) = hop_value(score_raw(store, pool[x], r, t));
        from_t(r, x) = hop_value(score_raw(store, t, r, pool[x]));
        to_h(r, x) = hop_value(score_raw(store, pool[x], r, h));
      }
    }
    for (std::size_t x = 0; x < pool.size(); ++x) {
      for (RelationId r1 = 0; r1 < n_relations; ++r1) {
        for (RelationId r2 = 0; r2 < n_relations; ++r2) {
          add_candidate(Path{{h, pool[x], t}, {r1, r2}}, PathRole::BridgeTwoHop,
                        0.5 * (from_h(r1, x) + to_t(r2, x)));
          add_candidate(Path{{t, pool[x], h}, {r1, r2}}, PathRole::BridgeTwoHop,
                        0.5 * (from_t(r1, x) + to_h(r2, x)));
        }
      }
    }
  }

  std::map<GroupKey, std::vector<const Candidate*>> groups;
  for (const auto& [path, candidate] : seen) {
    if (spec.excluded(path, candidate.role, query)) continue;
    groups[path.relations].push_back(&candidate);
  }

  std::vector<ScoredPath> out;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const Candidate* a, const Candidate* b) { return candidate_order(*a, *b); });
    const std::size_t keep = std::min(config.features_per_group, members.size());
    for (std::size_t i = 0; i < keep; ++i) {
      out.push_back(ScoredPath{members[i]->path, members[i]->role, members[i]->score});
    }
  }
  std::sort(out.begin(), out.end(), [](const ScoredPath& a, const ScoredPath& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.path < b.path;
  });
  return out;
}

namespace {

// Endpoint slot of a hop: the stored entity vector, or the perturbed head or
// tail block when the path entity equals the query endpoint.
enum class SlotKind : std::uint8_t { Stored, PerturbedHead, PerturbedTail };

struct HopAtom {
  SlotKind a_kind;
  EntityId a_id;
  RelationId relation;
  SlotKind b_kind;
  EntityId b_id;

  friend auto operator<=>(const HopAtom&, const HopAtom&) = default;
};

SlotKind classify(EntityId entity, const Triple& query) {
  if (entity == query.head) return SlotKind::PerturbedHead;
  if (entity == query.tail) return SlotKind::PerturbedTail;
  return SlotKind::Stored;
}

}  // namespace

Matrix compute_features(const EmbeddingStore& store, const Triple& query,
                        const PerturbedQueries& perturbed, std::span<const ScoredPath> paths) {
  const std::size_t n = perturbed.size();
  const std::size_t d = store.dim();
  Matrix features(n, paths.size());

  // Hop values are cached per atom: identical hops across paths (and constant
  // hops across rows) are computed once.
  std::map<HopAtom, std::vector<double>> cache;

  const auto slot_re = [&](SlotKind kind, EntityId id, std::size_t row) -> std::span<const double> {
    switch (kind) {
      case SlotKind::Stored: return store.entity_re(id);
      case SlotKind::PerturbedHead: return perturbed.head_re.row(row);
      case SlotKind::PerturbedTail: return perturbed.tail_re.row(row);
    }
    return store.entity_re(id);
  };
  const auto slot_im = [&](SlotKind kind, EntityId id, std::size_t row) -> std::span<const double> {
    switch (kind) {
      case SlotKind::Stored: return store.entity_im(id);
      case SlotKind::PerturbedHead: return perturbed.head_im.row(row);
      case SlotKind::PerturbedTail: return perturbed.tail_im.row(row);
    }
    return store.entity_im(id);
  };

  const auto atom_values = [&](const HopAtom& atom) -> const std::vector<double>& {
    auto it = cache.find(atom);
    if (it != cache.end()) return it->second;
    std::vector<double> values(n);
    const auto r_re = store.relation_re(atom.relation);
    const auto r_im = store.relation_im(atom.relation);
    if (atom.a_kind == SlotKind::Stored && atom.b_kind == SlotKind::Stored) {
      const double v = hop_value(score_raw(store, atom.a_id, atom.relation, atom.b_id));
      std::fill(values.begin(), values.end(), v);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = hop_value(score_raw(slot_re(atom.a_kind, atom.a_id, i),
                                        slot_im(atom.a_kind, atom.a_id, i), r_re, r_im,
                                        slot_re(atom.b_kind, atom.b_id, i),
                                        slot_im(atom.b_kind, atom.b_id, i)));
      }
    }
    return cache.emplace(atom, std::move(values)).first->second;
  };
  (void)d;

  for (std::size_t j = 0; j < paths.size(); ++j) {
    const Path& path = paths[j].path;
    const double inv_len = 1.0 / static_cast<double>(path.length());
    for (std::size_t hop = 0; hop < path.length(); ++hop) {
      const EntityId a = path.entities[hop];
      const EntityId b = path.entities[hop + 1];
      const HopAtom atom{classify(a, query), a, path.relations[hop], classify(b, query), b};
      const auto& values = atom_values(atom);
      for (std::size_t i = 0; i < n; ++i) {
        features(i, j) += inv_len * values[i];
      }
    }
  }
  return features;
}

std::vector<double> compute_labels(const EmbeddingStore& store, const Triple& query,
                                   const PerturbedQueries& perturbed) {
  const std::size_t n = perturbed.size();
  std::vector<double> labels(n);
  const auto r_re = store.relation_re(query.relation);
  const auto r_im = store.relation_im(query.relation);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = hop_value(score_raw(perturbed.head_re.row(i), perturbed.head_im.row(i), r_re, r_im,
                                    perturbed.tail_re.row(i), perturbed.tail_im.row(i)));
  }
  return labels;
}

Explanation explain(const EmbeddingStore& store, const Triple& query,
                    const PerturbationConfig& config, const FeatureSpec& spec) {
  config.validate();
  Explanation result;
  result.query = query;

  const SigmaResult sigma = compute_sigmas(store, query, config.neighbor_k);
  result.diagnostics.sigma_head = sigma.sigma_head;
  result.diagnostics.sigma_tail = sigma.sigma_tail;

  const PerturbedQueries perturbed =
      perturb_queries(store, query, sigma.sigma_head, sigma.sigma_tail, config.alpha,
                      config.n_perturbations, derive_seed(config.seed, 0));

  const std::vector<ScoredPath> candidates = select_paths(store, query, config, spec);
  result.diagnostics.candidate_paths = candidates.size();
  result.diagnostics.n_rows = config.n_perturbations;
  if (candidates.empty()) {
    return result;
  }

  const Matrix features = compute_features(store, query, perturbed, candidates);
  const std::vector<double> labels = compute_labels(store, query, perturbed);

  // Fit/holdout split on the rows; the holdout only measures fidelity.
  const std::size_t n = labels.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(derive_seed(config.seed, 1));
  rng.shuffle(order);
  const std::size_t n_holdout =
      std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(n) *
                                                        config.holdout_fraction));
  const std::size_t n_fit = n - n_holdout;
  result.diagnostics.n_fit = n_fit;
  result.diagnostics.n_holdout = n_holdout;

  Matrix fit_features(n_fit, features.cols);
  std::vector<double> fit_labels(n_fit);
  for (std::size_t i = 0; i < n_fit; ++i) {
    const std::uint32_t src = order[i];
    std::copy_n(features.row(src).data(), features.cols, fit_features.row(i).data());
    fit_labels[i] = labels[src];
  }

  const LassoFit fit = fit_nonneg_lasso(fit_features, fit_labels, config.lambda);
  result.diagnostics.lasso_converged = fit.converged;
  result.diagnostics.lasso_sweeps = fit.sweeps;

  std::vector<double> fit_pred(n_fit);
  for (std::size_t i = 0; i < n_fit; ++i) fit_pred[i] = fit.predict(fit_features.row(i));
  result.diagnostics.train_r2 = r_squared(fit_labels, fit_pred);

  std::vector<double> holdout_labels(n_holdout), holdout_pred(n_holdout);
  result.diagnostics.holdout_pairs.reserve(n_holdout);
  for (std::size_t i = 0; i < n_holdout; ++i) {
    const std::uint32_t src = order[n_fit + i];
    holdout_labels[i] = labels[src];
    holdout_pred[i] = fit.predict(features.row(src));
    result.diagnostics.holdout_pairs.emplace_back(holdout_labels[i], holdout_pred[i]);
  }
  result.fidelity = r_squared(holdout_labels, holdout_pred);

  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (fit.coefficients[j] > 0.0) {
      result.paths.push_back(Explanation::RankedPath{candidates[j].path, candidates[j].role,
                                                     fit.coefficients[j]});
    }
  }
  std::sort(result.paths.begin(), result.paths.end(),
            [](const Explanation::RankedPath& a, const Explanation::RankedPath& b) {
              if (a.coefficient != b.coefficient) return a.coefficient > b.coefficient;
              return a.path < b.path;
            });
  return result;
}

nlohmann::json explanation_to_json(const Explanation& explanation, const Vocabulary& vocab) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& ranked : explanation.paths) {
    nlohmann::json entities = nlohmann::json::array();
    for (const EntityId e : ranked.path.entities) entities.push_back(vocab.entity_name(e));
    nlohmann::json relations = nlohmann::json::array();
    for (const RelationId r : ranked.path.relations) relations.push_back(vocab.relation_name(r));
    paths.push_back(nlohmann::json{{"entities", entities},
                                   {"relations", relations},
                                   {"role", to_string(ranked.role)},
                                   {"coefficient", ranked.coefficient}});
  }
  const auto& d = explanation.diagnostics;
  return nlohmann::json{
      {"query",
       {{"head", vocab.entity_name(explanation.query.head)},
        {"relation", vocab.relation_name(explanation.query.relation)},
        {"tail", vocab.entity_name(explanation.query.tail)}}},
      {"paths", paths},
      {"n_paths", explanation.paths.size()},
      {"fidelity_r2", explanation.fidelity},
      {"diagnostics",
       {{"sigma_head", d.sigma_head},
        {"sigma_tail", d.sigma_tail},
        {"candidate_paths", d.candidate_paths},
        {"n_rows", d.n_rows},
        {"n_fit", d.n_fit},
        {"n_holdout", d.n_holdout},
        {"train_r2", d.train_r2},
        {"lasso_converged", d.lasso_converged},
        {"lasso_sweeps", d.lasso_sweeps}}},
  };
}

}  // namespace linklogic
