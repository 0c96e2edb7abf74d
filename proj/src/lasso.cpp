#include "linklogic/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "linklogic/types.hpp"

namespace linklogic {

double LassoFit::predict(std::span<const double> raw_row) const {
  double y = y_mean;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0.0) {
      y += coefficients[j] * (raw_row[j] - column_mean[j]);
    }
  }
  return y;
}

LassoFit fit_nonneg_lasso(const Matrix& features, std::span<const double> targets, double lambda,
                          double tol, std::size_t max_sweeps) {
  const std::size_t n = features.rows;
  const std::size_t m = features.cols;
  if (n == 0 || n != targets.size()) {
    throw NumericError("lasso: feature rows and target size must match and be nonzero");
  }
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw NumericError("lasso: lambda must be finite and non-negative");
  }
  for (const double x : features.data) {
    if (!std::isfinite(x)) throw NumericError("lasso: non-finite feature value");
  }
  for (const double y : targets) {
    if (!std::isfinite(y)) throw NumericError("lasso: non-finite target value");
  }

  LassoFit fit;
  fit.coefficients.assign(m, 0.0);
  fit.scaled_coefficients.assign(m, 0.0);
  fit.column_mean.assign(m, 0.0);
  fit.column_sd.assign(m, 0.0);

  double y_sum = 0.0;
  for (const double y : targets) y_sum += y;
  fit.y_mean = y_sum / static_cast<double>(n);

  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = targets[i] - fit.y_mean;

  // Standardized columns, column-major; kept tracks usable columns.
  std::vector<std::vector<double>> cols(m);
  std::vector<double> col_norm(m, 0.0);  // sum of squares of the standardized column
  std::vector<std::size_t> kept;
  kept.reserve(m);
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
    fit.column_mean[j] = mean;
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      continue;  // constant column: coefficient stays 0
    }
    fit.column_sd[j] = sd;
    auto& col = cols[j];
    col.resize(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = (features(i, j) - mean) / sd;
      norm += col[i] * col[i];
    }
    col_norm[j] = norm;
    kept.push_back(j);
  }

  double penalty = 0.0;  // lambda * sum beta, maintained incrementally
  const auto objective = [&] {
    double ss = 0.0;
    for (const double r : residual) ss += r * r;
    return ss + penalty;
  };

  for (std::size_t sweep = 1; sweep <= max_sweeps && !kept.empty(); ++sweep) {
    double max_change = 0.0;
    for (const std::size_t j : kept) {
      const auto& col = cols[j];
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += col[i] * residual[i];
      const double old = fit.scaled_coefficients[j];
      const double candidate = (dot + col_norm[j] * old - 0.5 * lambda) / col_norm[j];
      const double next = std::max(0.0, candidate);
      const double delta = next - old;
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) residual[i] -= col[i] * delta;
        fit.scaled_coefficients[j] = next;
        penalty += lambda * delta;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    fit.sweeps = sweep;
    fit.objective_trace.push_back(objective());
    if (max_change < tol) {
      fit.converged = true;
      break;
    }
  }
  if (kept.empty()) {
    fit.converged = true;
  }

  fit.objective = objective();
  for (const std::size_t j : kept) {
    fit.coefficients[j] = fit.scaled_coefficients[j] / fit.column_sd[j];
  }
  return fit;
}

}  // namespace linklogic
