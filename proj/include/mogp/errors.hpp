#pragma once

#include <stdexcept>
#include <string>

namespace mogp {

// A caller broke a documented precondition (mismatched vector lengths,
// empty fronts, invalid parameter combinations, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// External input (dataset files, result files) is missing, malformed,
// or fails validation against its expected shape.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration file or configuration value is unusable.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mogp
