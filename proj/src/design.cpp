#include "design.hpp"

#include "error.hpp"

namespace mif {

FitData build_fit_data(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors) {
  const Column& yc = data.column(ivar);
  std::vector<const Column*> pc;
  pc.reserve(predictors.size());
  for (const auto& name : predictors) {
    if (name == "_cons") throw DataError("'_cons' is implicit and cannot be a predictor");
    if (name == ivar) throw DataError("'" + name + "' cannot predict itself");
    pc.push_back(&data.column(name));
  }

  FitData fd;
  const std::size_t k1 = predictors.size() + 1;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    if (!yc.observed(i)) continue;
    for (std::size_t j = 0; j < pc.size(); ++j)
      if (!pc[j]->observed(i))
        throw DataError("predictor '" + predictors[j] + "' missing on row " +
                        std::to_string(i + 1) + " where '" + ivar + "' is observed");
    rows.push_back(i);
  }

  fd.y.resize(rows.size());
  fd.X.resize(rows.size(), k1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    fd.y[static_cast<Eigen::Index>(r)] = yc.value(rows[r]);
    for (std::size_t j = 0; j < pc.size(); ++j)
      fd.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = pc[j]->value(rows[r]);
    fd.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k1 - 1)) = 1.0;
  }
  fd.colnames = predictors;
  fd.colnames.push_back("_cons");
  fd.rows = std::move(rows);
  return fd;
}

bool full_column_rank(const Eigen::MatrixXd& X) {
  if (X.rows() < X.cols()) return false;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  return qr.rank() == X.cols();
}

}  // namespace mif
