#include "credal_mcdm/baselines.hpp"

#include <cmath>

#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

Composition ahp_gmm(const Eigen::MatrixXd& pcm) {
  const Eigen::Index n = pcm.rows();
  if (pcm.cols() != n) throw Error(ErrorCode::DimensionMismatch, "pairwise comparison matrix must be square");
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "need at least two criteria");
  if (!(pcm.minCoeff() > 0.0)) throw Error(ErrorCode::NonPositiveEntry, "pairwise comparisons must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (std::abs(pcm(i, j) * pcm(j, i) - 1.0) > 1e-6) {
        throw Error(ErrorCode::NonReciprocal, "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                  ") and (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                                  ") are not reciprocal");
      }
    }
  }
  const Eigen::VectorXd log_gm = pcm.array().log().rowwise().mean();
  return closure((log_gm.array() - log_gm.maxCoeff()).exp().matrix());
}

Composition bwm_consistent_weights(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst) {
  if (best_to_others.size() != others_to_worst.size()) {
    throw Error(ErrorCode::DimensionMismatch, "best-to-others and others-to-worst differ in length");
  }
  const Composition w = closure(others_to_worst);
  const Composition inverse = closure(best_to_others.cwiseInverse());
  if ((w.values() - inverse.values()).cwiseAbs().maxCoeff() > 1e-6) {
    throw Error(ErrorCode::InconsistentInput, "best-worst vectors are not fully consistent");
  }
  return w;
}

Eigen::VectorXd deterministic_wsm(const Eigen::MatrixXd& performance, const Eigen::VectorXd& w) {
  if (performance.cols() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "performance has " + std::to_string(performance.cols()) +
                                                  " criteria, weights have " + std::to_string(w.size()));
  }
  return performance * w;
}

}  // namespace credal_mcdm
