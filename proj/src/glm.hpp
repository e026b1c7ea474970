#pragma once

#include <string>
#include <vector>

#include "model.hpp"
#include "table.hpp"

namespace mif {

// Newton maximum likelihood, gradient sup-norm below 1e-10, at most 100
// iterations. Covariance is the inverse observed information.
FittedModel fit_logit(const DataTable& data, const std::string& ivar,
                      const std::vector<std::string>& predictors);

// Reference level is the smallest observed value; its coefficient row is
// identically zero and excluded from the covariance.
FittedModel fit_mlogit(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors);

}  // namespace mif
