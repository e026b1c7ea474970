#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "model.hpp"
#include "table.hpp"

namespace mif {

// Sum of rho_p(y - X b) with rho_p(u) = u * (p - [u < 0]).
double check_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double p,
                  const Eigen::VectorXd& beta);

// Minimizes the check loss. Smoothed Newton over a decreasing smoothing
// schedule, then exact coordinatewise minimization, then a snap to the
// interpolating basic solution when that does not worsen the objective.
// The result is coordinatewise optimal for the exact loss.
Eigen::VectorXd qreg_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double p,
                           const Eigen::VectorXd* warm_start = nullptr);

// 99 conditional-quantile fits of `ivar` on the predictors, p = 0.01..0.99,
// with one covariance block per quantile.
FittedModel fit_qreg99(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors);

}  // namespace mif
