#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gmh {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a statistic is evaluated at a point where it leaves the group,
/// e.g. the quadratic form at its own center.
class DegenerateStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the directional rejection loop of a guided step exceeds its
/// try budget.
class PathologicalProposalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmh
