#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linklogic/dataset.hpp"
#include "linklogic/embedding.hpp"
#include "linklogic/path.hpp"
#include "linklogic/util.hpp"

namespace linklogic {

struct PerturbationConfig {
  // Perturbation scale multiplier on the local sigma.
  double alpha = 1.0;
  // Number of perturbed query copies (feature matrix rows).
  std::size_t n_perturbations = 1000;
  // Fan-out k of the two-step neighborhood that defines sigma (k^2 neighbors).
  std::size_t neighbor_k = 10;
  // Paths kept per group (group = relation for one-hop, ordered relation pair
  // for bridges).
  std::size_t features_per_group = 20;
  // Lasso penalty in the standardized problem.
  double lambda = 0.2;
  // Entities considered per (anchor, relation, direction) when generating
  // one-hop candidates; their union forms the bridge intermediates.
  std::size_t candidate_fanout = 50;
  // Fraction of rows held out for the fidelity estimate.
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

// Declarative path exclusions, applied before per-group truncation. The
// query-inverse path is the single hop {tail, inverse_relation, head};
// patterns drop any path containing the relation (if set) and matching the
// role (if set).
struct FeatureSpec {
  bool exclude_query_inverse = false;
  std::optional<RelationId> inverse_relation;

  struct Pattern {
    std::optional<RelationId> relation;
    std::optional<PathRole> role;
  };
  std::vector<Pattern> exclusions;

  bool excluded(const Path& path, PathRole role, const Triple& query) const;
};

// Fills in the inverse relation for the query's relation from the schema
// (parent<->child, spouse and sibling self-inverse).
FeatureSpec make_feature_spec(const RelationSchema& schema, RelationId query_relation,
                              bool exclude_query_inverse);

struct SigmaResult {
  double sigma_head = 0.0;
  double sigma_tail = 0.0;
};

// Local embedding-space scale of the query endpoints. Head side: the top-k
// tails e_i of (h, r, ?), then for each e_i the top-k heads of (?, r, e_i);
// sigma_head is the RMS per-component distance between h and those k^2
// neighbor vectors (complex vectors flattened to 2*dim reals, neighbors
// counted with multiplicity). Tail side mirrors it: top-k heads of (?, r, t),
// then top-k tails of (e_i, r, ?).
SigmaResult compute_sigmas(const EmbeddingStore& store, const Triple& query, std::size_t k);

// n perturbed copies of the query endpoints: row i is endpoint + alpha *
// sigma * standard normal noise per real component. Row-major n x dim blocks;
// generation order (head re, head im, tail re, tail im per row) is fixed so a
// seed pins the exact matrix.
struct PerturbedQueries {
  Matrix head_re, head_im, tail_re, tail_im;
  std::size_t size() const { return head_re.rows; }
};

PerturbedQueries perturb_queries(const EmbeddingStore& store, const Triple& query,
                                 double sigma_head, double sigma_tail, double alpha,
                                 std::size_t n, std::uint64_t seed);

// Candidate paths around the query: one-hop paths anchored at head and tail
// (every relation, both directions, top candidate_fanout entities by raw
// score, self-loops excluded) plus two-hop bridges head->x->tail and
// tail->x->head where x ranges over the one-hop candidate entities minus the
// endpoints. The query triple itself is never a candidate. After exclusions,
// each group keeps its features_per_group best paths (score descending, ties
// by lexicographic path). Output is sorted the same way.
std::vector<ScoredPath> select_paths(const EmbeddingStore& store, const Triple& query,
                                     const PerturbationConfig& config, const FeatureSpec& spec);

// Feature matrix: X[i][j] = path score of paths[j] with every occurrence of
// the query head/tail replaced by perturbed row i. If head == tail, the head
// substitution wins. Paths not touching either endpoint yield constant
// columns.
Matrix compute_features(const EmbeddingStore& store, const Triple& query,
                        const PerturbedQueries& perturbed, std::span<const ScoredPath> paths);

// Labels: y_i = -log(1 - plausibility(head_i, r, tail_i)) on the perturbed
// endpoint pair, i.e. the path score of the query edge itself.
std::vector<double> compute_labels(const EmbeddingStore& store, const Triple& query,
                                   const PerturbedQueries& perturbed);

struct Explanation {
  Triple query;

  struct RankedPath {
    Path path;
    PathRole role = PathRole::HeadOneHop;
    double coefficient = 0.0;  // raw-feature-space, strictly positive
  };
  // Sorted by coefficient descending, ties by lexicographic path.
  std::vector<RankedPath> paths;

  // Holdout R^2 of the surrogate; 0 when the explanation is empty or labels
  // are constant.
  double fidelity = 0.0;

  struct Diagnostics {
    double sigma_head = 0.0, sigma_tail = 0.0;
    std::size_t candidate_paths = 0;
    std::size_t n_rows = 0, n_fit = 0, n_holdout = 0;
    double train_r2 = 0.0;
    bool lasso_converged = false;
    std::size_t lasso_sweeps = 0;
    std::vector<std::pair<double, double>> holdout_pairs;  // (label, prediction)
  } diagnostics;
};

// Full pipeline: sigmas -> perturbed queries -> candidate paths -> features/
// labels -> non-negative lasso on the fit rows -> nonzero paths ranked by
// coefficient, fidelity measured on the holdout rows. Deterministic for a
// fixed (store, query, config, spec).
Explanation explain(const EmbeddingStore& store, const Triple& query,
                    const PerturbationConfig& config, const FeatureSpec& spec = {});

nlohmann::json explanation_to_json(const Explanation& explanation, const Vocabulary& vocab);

}  // namespace linklogic
