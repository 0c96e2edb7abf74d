#pragma once

#include <span>
#include <vector>

#include "linklogic/util.hpp"

namespace linklogic {

// Non-negative lasso via cyclic coordinate descent:
//   min over beta >= 0 of sum_i (y_i - sum_j x_ij beta_j)^2 + lambda sum_j beta_j
// The solve standardizes columns (center, scale by population sd) and centers
// y; lambda and the reported objective live in that standardized problem.
// Coefficients are also folded back to raw-x space (beta_raw = beta_std / sd).
// Columns with (relatively) zero variance are dropped and get coefficient 0.
// The coordinate update is a soft threshold at lambda/2 clamped to zero, so
// lambda >= 2 * max_j |x_j . y_centered| forces the all-zero solution.
struct LassoFit {
  std::vector<double> coefficients;         // raw-x space
  std::vector<double> scaled_coefficients;  // standardized space
  std::vector<double> column_mean;
  std::vector<double> column_sd;  // 0 marks a dropped column
  double y_mean = 0.0;
  double objective = 0.0;                // standardized objective at the solution
  std::vector<double> objective_trace;   // one entry per sweep
  std::size_t sweeps = 0;
  bool converged = false;

  double predict(std::span<const double> raw_row) const;
};

// tol is the max coefficient change per sweep that counts as converged.
LassoFit fit_nonneg_lasso(const Matrix& features, std::span<const double> targets, double lambda,
                          double tol = 1e-8, std::size_t max_sweeps = 10000);

}  // namespace linklogic
