#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace linklogic {

enum class NdcgGain : std::uint8_t { Linear, Exponential };

// DCG over the first k items of an already-ranked relevance list:
// sum_i gain(rel_i) / log2(i + 1) with 1-based positions. Linear gain is
// rel_i; exponential is 2^rel_i - 1.
double dcg_at_k(std::span<const double> ranked_relevances, std::size_t k, NdcgGain gain);

// NDCG@k = DCG@k(ranked) / DCG@k(ideal ordering of ideal_pool). The ideal
// pool is the full relevance multiset the ranking is judged against (for
// benchmark queries: all entry confidences, found or not). Returns 0 when the
// ideal DCG is 0.
double ndcg_at_k(std::span<const double> ranked_relevances, std::span<const double> ideal_pool,
                 std::size_t k, NdcgGain gain = NdcgGain::Linear);

// Coefficient of determination, 1 - SS_res/SS_tot with SS_tot about the mean
// of y_true; 0 when y_true is constant. Unbounded below.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

}  // namespace linklogic
