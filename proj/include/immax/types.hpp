#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace immax {

using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for invalid configuration: out-of-range hyperparameters,
/// malformed profiles, missing required options. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised for malformed input files (CSV, scorer files). CLI exit code 2.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised for numerical failures (divergence, non-finite values).
/// CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// sign(a) = 1_{a >= 0} - 1_{a < 0}; ties at zero predict +1.
inline int sign_pm(Real a) { return a >= 0 ? +1 : -1; }

/// argmax with highest-index tie-breaking.
inline Index argmax_highest(const Vector& v) {
  Index best = 0;
  for (Index j = 1; j < v.size(); ++j) {
    if (v[j] >= v[best]) best = j;
  }
  return best;
}

}  // namespace immax
