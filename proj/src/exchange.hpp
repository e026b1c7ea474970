#pragma once

#include <string>
#include <vector>

#include "model.hpp"

namespace mif {

// Writes the b/v exchange pair. Paths without an extension get ".txt"
// appended, mirroring the CLI default.
void export_model(const FittedModel& m, const std::string& b_path,
                  const std::string& v_path);
void export_model(const PooledModel& m, const std::string& b_path,
                  const std::string& v_path);

struct GetOptions {
  std::vector<std::string> b_paths;
  std::vector<std::string> v_paths;
  std::vector<std::string> colnames;  // empty: trust the file headers
  ModelKind kind = ModelKind::qreg;
  std::vector<double> values;         // mlogit level list
  std::string path_prefix;            // joined to every file name
  bool scalar_pooling = false;        // diagonal-only weighting instead of GLS
  bool values_from_file = false;      // mlogit: take levels from the row labels
};

// Reads one or more b/v pairs and pools them with fixed-effect
// inverse-variance weighting (multivariate GLS per covariance block).
// A single pair passes through unchanged.
PooledModel get(const GetOptions& opt);

// Default-extension and prefix resolution used for every exchange path.
std::string resolve_exchange_path(const std::string& path, const std::string& prefix);

}  // namespace mif
