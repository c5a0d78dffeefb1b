#pragma once

#include <stdexcept>

namespace lsv {

/// A request the library cannot honor by construction (expansion order cap,
/// unsupported payoff class, implied vol for a defaultable model).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model inputs violate a structural condition (parabolicity, parameter
/// domain, negative killing rate).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric computation left its supported range (singular covariance,
/// vega underflow, non-finite Monte Carlo state).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsv
