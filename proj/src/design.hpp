#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "table.hpp"

namespace mif {

// Response + design rows restricted to observations where `ivar` is
// observed. The design carries the predictors in order plus a trailing
// intercept column, matching the `_cons`-last exchange convention.
struct FitData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;                   // n x (k+1), last column all ones
  std::vector<std::string> colnames;   // predictors + "_cons"
  std::vector<std::size_t> rows;       // source row of each design row
};

// Throws DataError if a predictor is missing on a row where ivar is
// observed, or if any name is unknown.
FitData build_fit_data(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors);

// Column rank via rank-revealing QR; used to reject rank-deficient designs.
bool full_column_rank(const Eigen::MatrixXd& X);

}  // namespace mif
