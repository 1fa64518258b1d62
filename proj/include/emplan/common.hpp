#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace emplan {

/// Agent state s in R^d. The terminal state is the all-zero vector.
using FeatureVector = Eigen::VectorXd;

/// Raised when a caller violates an operation's precondition
/// (out-of-range action, stepping a finished episode, bad dimensions...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a learning update produces a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index into an environment's discrete action set.
struct Action {
  std::size_t index = 0;

  friend bool operator==(Action, Action) = default;
};

/// Discount factor gamma in [0, 1].
class Discount {
 public:
  constexpr Discount() = default;
  explicit Discount(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw UsageError("discount must lie in [0, 1], got " + std::to_string(gamma));
    }
  }
  constexpr double value() const { return gamma_; }

 private:
  double gamma_ = 1.0;
};

inline void requireFinite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DivergenceError(std::string("non-finite value in ") + what);
  }
}

}  // namespace emplan
