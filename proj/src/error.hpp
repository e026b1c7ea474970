#pragma once

#include <stdexcept>
#include <string>

namespace mif {

// Malformed invocations: bad flag combinations, missing required options.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable files, malformed content, schema or data-state violations.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Singular systems, non-convergence, degenerate likelihoods.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mif
