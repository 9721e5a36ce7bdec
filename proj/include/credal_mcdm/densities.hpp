#pragma once

// Log-density primitives. Unless stated otherwise each function returns the
// full normalized log-density; -infinity (never an error) outside the support.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "credal_mcdm/compositions.hpp"
#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

namespace detail {

template <typename A, typename B>
void require_same_size(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": sizes " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()) + " differ");
  }
}

}  // namespace detail

/// Dirichlet log-density with parameter vector alpha.
template <typename X, typename A>
typename X::Scalar log_dirichlet(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<A>& alpha) {
  using Scalar = typename X::Scalar;
  using std::lgamma;
  using std::log;
  detail::require_same_size(x, alpha, "log_dirichlet");
  Scalar total(0);
  Scalar alpha_sum(0);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(alpha(j) > Scalar(0))) {
      throw Error(ErrorCode::InvalidParameter, "Dirichlet parameter must be positive");
    }
    if (!(x(j) > Scalar(0))) return Scalar(kNegInf);
    total += (alpha(j) - Scalar(1)) * log(x(j)) - lgamma(alpha(j));
    alpha_sum += alpha(j);
  }
  return total + lgamma(alpha_sum);
}

/// Dirichlet with parameter concentration * mean, so that `mean` is the
/// expectation and `concentration` controls the spread around it.
template <typename X, typename M>
typename X::Scalar log_dirichlet_mean(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<M>& mean,
                                      typename X::Scalar concentration) {
  using Scalar = typename X::Scalar;
  detail::require_same_size(x, mean, "log_dirichlet_mean");
  if (!(concentration > Scalar(0))) {
    throw Error(ErrorCode::InvalidParameter, "Dirichlet concentration must be positive");
  }
  const auto alpha = (concentration * mean).eval();
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    // A positive mean part times a positive concentration can still underflow.
    if (mean(j) > Scalar(0) && !(alpha(j) > Scalar(0))) return Scalar(kNegInf);
  }
  return log_dirichlet(x, alpha);
}

enum class Orientation { direct, inverse };

/// Multinomial log-likelihood without the multinomial coefficient. With the
/// inverse orientation the probabilities are closure(1 / weights).
template <typename C, typename W>
typename W::Scalar log_multinomial(const Eigen::MatrixBase<C>& counts, const Eigen::MatrixBase<W>& weights,
                                   Orientation orientation) {
  using Scalar = typename W::Scalar;
  using std::log;
  detail::require_same_size(counts, weights, "log_multinomial");
  bool any_positive = false;
  for (Eigen::Index j = 0; j < counts.size(); ++j) {
    if (counts(j) < 0) throw Error(ErrorCode::InvalidParameter, "multinomial counts must be non-negative");
    any_positive = any_positive || counts(j) > 0;
  }
  if (!any_positive) throw Error(ErrorCode::AllZeroCounts, "multinomial counts are all zero");

  Scalar log_norm(0);
  if (orientation == Orientation::inverse) {
    Scalar inv_sum(0);
    for (Eigen::Index j = 0; j < weights.size(); ++j) inv_sum += Scalar(1) / weights(j);
    log_norm = log(inv_sum);
  }
  Scalar total(0);
  for (Eigen::Index j = 0; j < counts.size(); ++j) {
    if (counts(j) == 0) continue;
    if (!(weights(j) > Scalar(0))) return Scalar(kNegInf);
    const Scalar log_p = orientation == Orientation::direct ? log(weights(j)) : -log(weights(j)) - log_norm;
    total += Scalar(counts(j)) * log_p;
  }
  return total;
}

/// Cholesky factorization with the jitter schedule 0, 1e-9 I, 1e-6 I.
Eigen::LLT<Eigen::MatrixXd> factor_covariance(const Eigen::MatrixXd& covariance);

/// Multivariate normal log-density with a covariance factored once up front.
class GaussianLogDensity {
 public:
  explicit GaussianLogDensity(const Eigen::MatrixXd& covariance);

  Eigen::Index dimension() const noexcept { return dimension_; }

  template <typename X, typename M>
  double operator()(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<M>& mean) const {
    detail::require_same_size(x, mean, "log_mvn");
    if (x.size() != dimension_) {
      throw Error(ErrorCode::DimensionMismatch, "log_mvn: point and covariance dimensions differ");
    }
    const Eigen::VectorXd z = llt_.matrixL().solve((x - mean).template cast<double>().eval());
    return -0.5 * (static_cast<double>(dimension_) * std::log(2.0 * std::numbers::pi) + z.squaredNorm()) -
           half_log_det_;
  }

 private:
  Eigen::Index dimension_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double half_log_det_;
};

double log_mvn(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

/// Univariate distributions used for priors and preference uncertainty.
struct ScalarDistribution {
  enum class Kind { gamma, normal, uniform };

  Kind kind;
  double first;   // gamma shape a, normal mean, uniform lower
  double second;  // gamma rate b, normal sd, uniform upper

  static ScalarDistribution gamma(double shape, double rate) { return {Kind::gamma, shape, rate}; }
  static ScalarDistribution normal(double mean, double sd) { return {Kind::normal, mean, sd}; }
  static ScalarDistribution uniform(double lower, double upper) { return {Kind::uniform, lower, upper}; }
};

double scalar_log_density(const ScalarDistribution& dist, double x);

inline double log_normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// Normalized symmetric triangular density on [lower, upper], peaking at the
/// midpoint.
double log_symmetric_triangular(double x, double lower, double upper);

/// log(sum(exp(values))) without overflow.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  using std::log;
  const Scalar top = values.maxCoeff();
  if (!std::isfinite(static_cast<double>(top))) return top;
  return top + log((values.array() - top).exp().sum());
}

}  // namespace credal_mcdm
