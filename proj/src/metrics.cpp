#include "linklogic/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "linklogic/types.hpp"

namespace linklogic {

double dcg_at_k(std::span<const double> ranked_relevances, std::size_t k, NdcgGain gain) {
  const std::size_t limit = std::min(k, ranked_relevances.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < limit; ++i) {
    const double rel = ranked_relevances[i];
    const double g = gain == NdcgGain::Linear ? rel : std::exp2(rel) - 1.0;
    sum += g / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}

double ndcg_at_k(std::span<const double> ranked_relevances, std::span<const double> ideal_pool,
                 std::size_t k, NdcgGain gain) {
  if (k == 0) throw ConfigError("ndcg k must be positive");
  std::vector<double> ideal(ideal_pool.begin(), ideal_pool.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k, gain);
  if (idcg <= 0.0) return 0.0;
  return dcg_at_k(ranked_relevances, k, gain) / idcg;
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty()) {
    throw NumericError("r_squared: inputs must be nonempty and equal-sized");
  }
  double mean = 0.0;
  for (const double y : y_true) mean += y;
  mean /= static_cast<double>(y_true.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  }
  if (ss_tot == 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace linklogic
