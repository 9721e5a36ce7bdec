#pragma once

// Evaluating, ranking and sorting alternatives against weight samples.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/credal.hpp"
#include "credal_mcdm/model_spec.hpp"
#include "credal_mcdm/sampler.hpp"

namespace credal_mcdm {

/// m alternatives x n criteria, every entry in [0, 1], larger is better.
struct PerformanceMatrix {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  Eigen::MatrixXd values;

  static PerformanceMatrix from_values(std::vector<std::string> alternatives, std::vector<std::string> criteria,
                                       Eigen::MatrixXd values);
};

/// U(a, w) = sum_j a_j w_j.
double aggregate_wsm(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Utility of one alternative under one weight vector. `linear` marks
/// operators that are linear in each argument, which lets expectations be
/// taken on the means.
struct Aggregator {
  std::function<double(const Eigen::Ref<const Eigen::VectorXd>&, const Eigen::Ref<const Eigen::VectorXd>&)> apply;
  bool linear = false;

  static Aggregator wsm() { return {aggregate_wsm, true}; }
};

/// Q x m matrix of utilities, one row per weight draw (Q x n).
Eigen::MatrixXd utility_samples(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                const Aggregator& g = Aggregator::wsm());

/// Mean utility of every alternative over the weight draws.
Eigen::VectorXd expected_utility(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                 const Aggregator& g = Aggregator::wsm());

/// Mean of G(a^q1, w^q2) over all pairs of performance draws (Q1 x n) and
/// weight draws (Q2 x n).
double expected_utility_distributional(const Eigen::MatrixXd& performance_draws, const Eigen::MatrixXd& weight_draws,
                                       const Aggregator& g = Aggregator::wsm());

CredalRanking alternative_credal(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                 const Aggregator& g = Aggregator::wsm());

struct SortingConfig {
  int clusters = 2;
  double sigma = 1.0;                           // spread of utilities around their cluster center
  std::optional<Eigen::VectorXd> lambda_prior;  // theta_hat[i] ~ Dir(lambda), defaults to 1/Z entries
  double center_prior_mean = 0.5;
  double center_prior_sd = 1.0;
};

/// Parameter blocks: omega_hat[z] (cluster centers in [0, 1]) and
/// theta_hat[i] (simplex over clusters, one per alternative).
ModelSpec build_sorting_posterior(const Eigen::VectorXd& utilities, const SortingConfig& config);

/// Same model with each alternative's likelihood averaged over utility draws
/// (Q x m); at most 256 evenly spaced draws are used.
ModelSpec build_sorting_posterior(const Eigen::MatrixXd& utility_draws, const SortingConfig& config);

struct SortingResult {
  PosteriorSamples samples;     // relabelled, clusters ordered by descending center
  Eigen::VectorXd centers;      // posterior mean per cluster
  Eigen::MatrixXd memberships;  // m x Z
  std::vector<int> assignment;  // most probable cluster per alternative, 0-based
};

SortingResult summarize_sorting(const PosteriorSamples& samples, const Eigen::VectorXd& utilities, double sigma);

}  // namespace credal_mcdm
