#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace minrisk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a linear solve cannot be trusted: the Cholesky factorization
/// failed, the reciprocal condition estimate fell below 1e-12, or the solved
/// portfolio violates its constraints. The harness counts trials that fail
/// with this error instead of dropping them silently.
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minrisk
