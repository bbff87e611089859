#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace oudrift {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Input is outside the domain an operation is defined on: stability
/// assumption violated, singular system, infeasible constraint set, ...
/// Distinct from std::invalid_argument, which flags malformed arguments
/// (wrong shapes, parameters outside their stated ranges).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oudrift
