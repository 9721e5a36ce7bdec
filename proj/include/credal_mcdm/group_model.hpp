#pragma once

// Hierarchical posterior over individual and aggregated criteria weights.

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/model_spec.hpp"
#include "credal_mcdm/preferences.hpp"

namespace credal_mcdm {

/// Shape/rate of the gamma prior on every concentration parameter.
struct GammaPrior {
  double shape = 0.01;
  double rate = 0.01;
};

/// w^r ~ Dir(gamma_star * w_star), w_star ~ Dir(alpha).
struct DirichletAggregation {};

/// clr(w^r) ~ MVN(w_star, covariance), w_star ~ MVN(mu, prior_covariance),
/// with w_star living in CLR space and reported on the simplex via
/// clr_inverse.
///
/// prior_covariance defaults to the identity. Reusing a small `covariance`
/// for the prior pins w_star near uniform; pass it explicitly to get that.
struct LogisticNormalAggregation {
  Eigen::MatrixXd covariance;
  std::optional<Eigen::MatrixXd> prior_covariance;
};

struct GroupConfig {
  std::variant<DirichletAggregation, LogisticNormalAggregation> aggregation = DirichletAggregation{};
  GammaPrior gamma_prior;
  std::optional<Eigen::VectorXd> alpha_prior;  // defaults to 1/n entries
  std::optional<Eigen::VectorXd> mu_prior;     // defaults to 1/n entries
  // Uncertain best-to-others vectors centered on w itself instead of
  // closure(1/w), reproducing the literal uncertain-BWM model statement.
  bool strict_paper_bwm = false;
};

/// Parameter blocks (1-based indices in names):
///   w_star, gamma_star          Dirichlet aggregation, R > 1
///   w_star_clr (-> w_star)      logistic-normal aggregation, R > 1
///   w[r]                        individual weights
///   gamma[r]                    concentration of AHP / non-multinomial records
///   m[r][i,j], a[r][j], a_best[r][j], a_worst[r][j]
///                               latent values of uncertain judgements
/// With a single record the aggregation layer is omitted.
ModelSpec build_group_posterior(const std::vector<PreferenceRecord>& records, const GroupConfig& config);

/// Pearson correlation between the columns of a performance matrix. Constant
/// columns are uncorrelated with everything else.
Eigen::MatrixXd covariance_from_performance(const Eigen::MatrixXd& performance);

/// Per-record likelihood terms on realized preference values.
namespace likelihood {

/// Multinomial on integer-valued ratings.
double value_vector(const Eigen::VectorXd& values, const Eigen::VectorXd& w);
/// Dirichlet on the closure of real-valued ratings.
double value_vector_dirichlet(const Eigen::VectorXd& values, const Eigen::VectorXd& w, double gamma);

/// Others-to-worst ~ multinomial(w), best-to-others ~ multinomial(closure(1/w)).
double bwm(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst, const Eigen::VectorXd& w);
double bwm_dirichlet(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst,
                     const Eigen::VectorXd& w, double gamma, bool strict_paper = false);

/// Sum over columns of Dir(closure(column) | gamma * w).
double ahp(const Eigen::MatrixXd& pcm, const Eigen::VectorXd& w, double gamma);

}  // namespace likelihood

}  // namespace credal_mcdm
