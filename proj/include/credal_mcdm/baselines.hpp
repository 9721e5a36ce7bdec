#pragma once

// Classical point estimates, kept as deterministic references for the
// posterior means.

#include <Eigen/Dense>

#include "credal_mcdm/compositions.hpp"

namespace credal_mcdm {

/// Geometric-mean AHP weights: closure of the row-wise geometric means.
Composition ahp_gmm(const Eigen::MatrixXd& pcm);

/// BWM weights for a fully consistent pair of vectors, closure(A_W), which
/// must agree with closure(1 / A_B) to 1e-6.
Composition bwm_consistent_weights(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst);

/// Weighted sum of every row of `performance` (m x n).
Eigen::VectorXd deterministic_wsm(const Eigen::MatrixXd& performance, const Eigen::VectorXd& w);

}  // namespace credal_mcdm
