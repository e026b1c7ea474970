#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mif {

enum class ModelKind { qreg, logit, mlogit };

std::string kind_name(ModelKind k);
ModelKind kind_from_name(const std::string& name);  // throws UsageError

inline constexpr int kQregQuantiles = 99;

// Donor-side fit of an imputation model. Layout by kind:
//   qreg    coef 99 x (k+1), rows p = 0.01..0.99;
//           cov stacked per-quantile blocks, (99*(k+1)) x (k+1)
//   logit   coef 1 x (k+1); cov (k+1) x (k+1)
//   mlogit  coef K x (k+1), rows by ascending level, reference row all zero;
//           cov full ((K-1)*(k+1)) square over non-reference rows, level-major
// Column order is `colnames`, always ending in `_cons`.
struct FittedModel {
  ModelKind kind = ModelKind::qreg;
  std::vector<std::string> colnames;
  Eigen::MatrixXd coef;
  Eigen::MatrixXd cov;
  std::vector<double> level_values;  // mlogit only, ascending
  long n_obs = 0;
  bool perfect_prediction = false;

  std::size_t n_coef() const { return colnames.size(); }
};

// Output of pooling one or more exchange files; same layout as FittedModel.
struct PooledModel {
  ModelKind kind = ModelKind::qreg;
  std::vector<std::string> colnames;
  Eigen::MatrixXd coef;
  Eigen::MatrixXd cov;
  std::vector<double> level_values;       // mlogit only, ascending
  std::size_t reference_index = 0;        // mlogit: position of the all-zero row
  int n_sources = 0;
  std::vector<std::string> warnings;

  std::size_t n_coef() const { return colnames.size(); }
};

}  // namespace mif
