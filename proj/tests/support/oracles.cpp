#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "linklogic/rng.hpp"

namespace linklogic::testing {

EmbeddingStore random_store(std::size_t n_entities, std::size_t n_relations, std::size_t dim,
                            std::uint64_t seed, double scale) {
  EmbeddingStore store(n_entities, n_relations, dim);
  Rng rng(seed);
  const auto fill = [&](std::vector<double>& block) {
    for (double& x : block) x = scale * (2.0 * rng.uniform() - 1.0);
  };
  fill(store.entity_re_data());
  fill(store.entity_im_data());
  fill(store.relation_re_data());
  fill(store.relation_im_data());
  return store;
}

double oracle_score(const EmbeddingStore& store, EntityId h, RelationId r, EntityId t) {
  const auto h_re = store.entity_re(h), h_im = store.entity_im(h);
  const auto r_re = store.relation_re(r), r_im = store.relation_im(r);
  const auto t_re = store.entity_re(t), t_im = store.entity_im(t);
  std::complex<double> sum = 0.0;
  for (std::size_t c = 0; c < store.dim(); ++c) {
    const std::complex<double> hc(h_re[c], h_im[c]);
    const std::complex<double> rc(r_re[c], r_im[c]);
    const std::complex<double> tc(t_re[c], t_im[c]);
    sum += hc * rc * std::conj(tc);
  }
  return sum.real();
}

double oracle_plausibility(double raw_score) {
  const double f = 1.0 / (1.0 + std::exp(-raw_score));
  return std::min(1.0 - 1e-12, std::max(1e-12, f));
}

double oracle_hop_value(double raw_score) {
  return -std::log1p(-oracle_plausibility(raw_score));
}

double oracle_path_score(const EmbeddingStore& store, const Path& path) {
  double sum = 0.0;
  for (std::size_t hop = 0; hop < path.length(); ++hop) {
    sum += oracle_hop_value(
        oracle_score(store, path.entities[hop], path.relations[hop], path.entities[hop + 1]));
  }
  return sum / static_cast<double>(path.length());
}

namespace {

std::vector<std::pair<EntityId, double>> sorted_candidates(
    std::vector<std::pair<EntityId, double>> scored, std::size_t k) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace

std::vector<std::pair<EntityId, double>> oracle_top_tails(const EmbeddingStore& store, EntityId h,
                                                          RelationId r, std::size_t k) {
  std::vector<std::pair<EntityId, double>> scored;
  for (EntityId e = 0; e < store.num_entities(); ++e) {
    scored.emplace_back(e, oracle_score(store, h, r, e));
  }
  return sorted_candidates(std::move(scored), k);
}

std::vector<std::pair<EntityId, double>> oracle_top_heads(const EmbeddingStore& store,
                                                          RelationId r, EntityId t,
                                                          std::size_t k) {
  std::vector<std::pair<EntityId, double>> scored;
  for (EntityId e = 0; e < store.num_entities(); ++e) {
    scored.emplace_back(e, oracle_score(store, e, r, t));
  }
  return sorted_candidates(std::move(scored), k);
}

SigmaResult oracle_sigmas(const EmbeddingStore& store, const Triple& query, std::size_t k) {
  const auto side = [&](EntityId anchor, bool anchor_is_head) {
    std::vector<EntityId> neighbors;
    const auto ring1 = anchor_is_head ? oracle_top_tails(store, anchor, query.relation, k)
                                      : oracle_top_heads(store, query.relation, anchor, k);
    for (const auto& [e1, s1] : ring1) {
      const auto ring2 = anchor_is_head ? oracle_top_heads(store, query.relation, e1, k)
                                        : oracle_top_tails(store, e1, query.relation, k);
      for (const auto& [e2, s2] : ring2) neighbors.push_back(e2);
    }
    if (neighbors.empty()) return 0.0;
    double sum_sq = 0.0;
    for (const EntityId n : neighbors) {
      for (std::size_t c = 0; c < store.dim(); ++c) {
        const double dr = store.entity_re(n)[c] - store.entity_re(anchor)[c];
        const double di = store.entity_im(n)[c] - store.entity_im(anchor)[c];
        sum_sq += dr * dr + di * di;
      }
    }
    const double denom = static_cast<double>(neighbors.size()) * 2.0 * static_cast<double>(store.dim());
    return std::sqrt(sum_sq / denom);
  };
  return SigmaResult{side(query.head, true), side(query.tail, false)};
}

std::vector<ScoredPath> oracle_select_paths(const EmbeddingStore& store, const Triple& query,
                                            const PerturbationConfig& config,
                                            const FeatureSpec& spec) {
  const EntityId h = query.head;
  const EntityId t = query.tail;
  const std::size_t n_entities = store.num_entities();
  const std::size_t n_relations = store.num_relations();
  const Path query_path{{h, t}, {query.relation}};

  std::map<Path, ScoredPath> seen;
  const auto add = [&](Path path, PathRole role, double score) {
    if (path == query_path) return;
    if (seen.find(path) == seen.end()) {
      Path key = path;
      seen.emplace(std::move(key), ScoredPath{std::move(path), role, score});
    }
  };

  // One-hop paths from each anchor: every relation, both directions, every
  // other entity. Head anchor first so shared paths keep the head role.
  const std::pair<EntityId, PathRole> anchors[] = {{h, PathRole::HeadOneHop},
                                                   {t, PathRole::TailOneHop}};
  for (const auto& [anchor, role] : anchors) {
    for (RelationId r = 0; r < n_relations; ++r) {
      for (EntityId e = 0; e < n_entities; ++e) {
        if (e == anchor) continue;
        add(Path{{anchor, e}, {r}}, role, oracle_hop_value(oracle_score(store, anchor, r, e)));
        add(Path{{e, anchor}, {r}}, role, oracle_hop_value(oracle_score(store, e, r, anchor)));
      }
    }
  }

  // Bridges through every other entity, both orientations.
  for (EntityId x = 0; x < n_entities; ++x) {
    if (x == h || x == t) continue;
    for (RelationId r1 = 0; r1 < n_relations; ++r1) {
      for (RelationId r2 = 0; r2 < n_relations; ++r2) {
        add(Path{{h, x, t}, {r1, r2}}, PathRole::BridgeTwoHop,
            0.5 * (oracle_hop_value(oracle_score(store, h, r1, x)) +
                   oracle_hop_value(oracle_score(store, x, r2, t))));
        add(Path{{t, x, h}, {r1, r2}}, PathRole::BridgeTwoHop,
            0.5 * (oracle_hop_value(oracle_score(store, t, r1, x)) +
                   oracle_hop_value(oracle_score(store, x, r2, h))));
      }
    }
  }

  std::map<std::vector<RelationId>, std::vector<const ScoredPath*>> groups;
  for (const auto& [path, candidate] : seen) {
    if (spec.excluded(path, candidate.role, query)) continue;
    groups[path.relations].push_back(&candidate);
  }

  const auto order = [](const ScoredPath* a, const ScoredPath* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->path < b->path;
  };
  std::vector<ScoredPath> out;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(), order);
    for (std::size_t i = 0; i < std::min(config.features_per_group, members.size()); ++i) {
      out.push_back(*members[i]);
    }
  }
  std::sort(out.begin(), out.end(), [](const ScoredPath& a, const ScoredPath& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.path < b.path;
  });
  return out;
}

OracleLasso oracle_lasso_pg(const Matrix& features, std::span<const double> targets, double lambda,
                            std::size_t max_iters) {
  const std::size_t n = features.rows;
  const std::size_t m = features.cols;

  double y_mean = 0.0;
  for (const double y : targets) y_mean += y;
  y_mean /= static_cast<double>(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = targets[i] - y_mean;

  // Same standardization and drop rule as the solver under test.
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = features(i, j) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) continue;
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = (features(i, j) - mean) / sd;
    cols.push_back(std::move(col));
  }

  OracleLasso result;
  const std::size_t p = cols.size();
  result.beta.assign(p, 0.0);
  if (p == 0) {
    double ss = 0.0;
    for (const double v : y) ss += v * v;
    result.objective = ss;
    return result;
  }

  std::vector<std::vector<double>> gram(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += cols[a][i] * cols[b][i];
      gram[a][b] = dot;
    }
    for (std::size_t i = 0; i < n; ++i) xty[a] += cols[a][i] * y[i];
  }

  // Gershgorin bound on the largest eigenvalue of 2 * Gram.
  double lipschitz = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < p; ++b) row += std::abs(gram[a][b]);
    lipschitz = std::max(lipschitz, 2.0 * row);
  }
  const double step = 1.0 / lipschitz;

  std::vector<double> grad(p);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (std::size_t a = 0; a < p; ++a) {
      double gx = 0.0;
      for (std::size_t b = 0; b < p; ++b) gx += gram[a][b] * result.beta[b];
      grad[a] = 2.0 * (gx - xty[a]) + lambda;
    }
    double max_change = 0.0;
    for (std::size_t a = 0; a < p; ++a) {
      const double next = std::max(0.0, result.beta[a] - step * grad[a]);
      max_change = std::max(max_change, std::abs(next - result.beta[a]));
      result.beta[a] = next;
    }
    if (max_change < 1e-13 && iter > 32) break;
  }

  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t a = 0; a < p; ++a) pred += cols[a][i] * result.beta[a];
    const double r = y[i] - pred;
    objective += r * r;
  }
  for (const double b : result.beta) objective += lambda * b;
  result.objective = objective;
  return result;
}

double oracle_ndcg(std::vector<double> ranked, std::vector<double> pool, std::size_t k,
                   bool exponential) {
  const auto gain = [&](double rel) { return exponential ? std::exp2(rel) - 1.0 : rel; };
  const auto dcg = [&](const std::vector<double>& rels) {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(k, rels.size()); ++i) {
      sum += gain(rels[i]) / std::log2(static_cast<double>(i) + 2.0);
    }
    return sum;
  };
  std::sort(pool.begin(), pool.end(), std::greater<>());
  const double ideal = dcg(pool);
  if (ideal <= 0.0) return 0.0;
  return dcg(ranked) / ideal;
}

}  // namespace linklogic::testing
