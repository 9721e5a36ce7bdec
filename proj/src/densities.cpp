#include "credal_mcdm/densities.hpp"

namespace credal_mcdm {

Eigen::LLT<Eigen::MatrixXd> factor_covariance(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "covariance matrix is not square");
  }
  const Eigen::Index n = covariance.rows();
  for (const double jitter : {0.0, 1e-9, 1e-6}) {
    Eigen::LLT<Eigen::MatrixXd> llt(covariance + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0.0) {
      return llt;
    }
  }
  throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive definite after jitter");
}

GaussianLogDensity::GaussianLogDensity(const Eigen::MatrixXd& covariance)
    : dimension_(covariance.rows()), llt_(factor_covariance(covariance)) {
  half_log_det_ = llt_.matrixLLT().diagonal().array().log().sum();
}

double log_mvn(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) {
  return GaussianLogDensity(covariance)(x, mean);
}

double scalar_log_density(const ScalarDistribution& dist, double x) {
  switch (dist.kind) {
    case ScalarDistribution::Kind::gamma: {
      const double a = dist.first;
      const double b = dist.second;
      if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidParameter, "gamma needs shape, rate > 0");
      if (!(x > 0.0)) return kNegInf;
      return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
    }
    case ScalarDistribution::Kind::normal:
      if (!(dist.second > 0.0)) throw Error(ErrorCode::InvalidParameter, "normal needs sd > 0");
      return log_normal_pdf(x, dist.first, dist.second);
    case ScalarDistribution::Kind::uniform:
      if (!(dist.first < dist.second)) throw Error(ErrorCode::InvalidParameter, "uniform needs lower < upper");
      if (x < dist.first || x > dist.second) return kNegInf;
      return -std::log(dist.second - dist.first);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown distribution kind");
}

double log_symmetric_triangular(double x, double lower, double upper) {
  if (!(lower < upper)) throw Error(ErrorCode::InvalidInterval, "triangular needs lower < upper");
  const double half_width = 0.5 * (upper - lower);
  const double height = 1.0 - std::abs(x - 0.5 * (lower + upper)) / half_width;
  if (!(height > 0.0)) return kNegInf;
  return std::log(height) - std::log(half_width);
}

}  // namespace credal_mcdm
