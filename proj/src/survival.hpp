#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "table.hpp"

namespace mif {

// Per-row survival annotations; cumhaz[i] is the Nelson-Aalen cumulative
// hazard evaluated at row i's own time.
struct SurvivalColumns {
  std::vector<double> time;
  std::vector<double> event;
  std::vector<double> cumhaz;
};

SurvivalColumns nelson_aalen(const DataTable& data, const std::string& time_col,
                             const std::string& event_col);

struct CoxFit {
  std::vector<std::string> names;
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;
  double loglik = 0.0;
};

// Breslow-ties partial likelihood, Newton iterations to gradient sup-norm
// below 1e-8. No intercept; `terms` are existing numeric columns.
CoxFit fit_cox(const DataTable& data, const std::string& time_col,
               const std::string& event_col, const std::vector<std::string>& terms);

}  // namespace mif
