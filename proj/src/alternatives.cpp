#include "credal_mcdm/alternatives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/error.hpp"
#include "credal_mcdm/mixture_model.hpp"

namespace credal_mcdm {

namespace {

constexpr Eigen::Index kMaxAveragedDraws = 256;
constexpr double kCenterMargin = 1e-3;

std::string indexed(const char* base, Eigen::Index k) { return std::string(base) + "[" + std::to_string(k + 1) + "]"; }

void require_columns(const Eigen::MatrixXd& draws, Eigen::Index n, const char* what) {
  if (draws.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " have " + std::to_string(draws.cols()) +
                                                  " columns, expected " + std::to_string(n));
  }
  if (draws.rows() == 0) throw Error(ErrorCode::EmptyInput, std::string(what) + " are empty");
}

struct SortingModel {
  int clusters = 1;
  Eigen::MatrixXd utilities;  // draws x m; a single row for the plain model
  double sigma = 1.0;
  Eigen::VectorXd lambda;
  double prior_mean = 0.5;
  double prior_sd = 1.0;
  Eigen::Index theta_offset = 0;  // theta_hat blocks follow the centers contiguously

  double operator()(const Eigen::VectorXd& x) const {
    const auto centers = x.head(clusters);
    double lp = 0.0;
    for (int z = 0; z < clusters; ++z) lp += log_normal_pdf(centers[z], prior_mean, prior_sd);
    const double log_draws = std::log(static_cast<double>(utilities.rows()));
    Eigen::VectorXd terms(clusters * utilities.rows());
    for (Eigen::Index i = 0; i < utilities.cols(); ++i) {
      const auto th = x.segment(theta_offset + i * clusters, clusters);
      if (!(th.minCoeff() > 0.0)) return kNegInf;
      if (clusters > 1) lp += log_dirichlet(th, lambda);
      for (Eigen::Index q = 0; q < utilities.rows(); ++q) {
        for (int z = 0; z < clusters; ++z) {
          terms[q * clusters + z] = std::log(th[z]) + log_normal_pdf(utilities(q, i), centers[z], sigma);
        }
      }
      lp += log_sum_exp(terms) - log_draws;
    }
    return std::isfinite(lp) ? lp : kNegInf;
  }
};

ModelSpec sorting_spec(Eigen::MatrixXd utilities, const SortingConfig& config) {
  const Eigen::Index m = utilities.cols();
  if (config.clusters < 1) throw Error(ErrorCode::InvalidParameter, "need at least one cluster");
  if (m < config.clusters) {
    throw Error(ErrorCode::TooManyClusters,
                std::to_string(config.clusters) + " clusters for " + std::to_string(m) + " alternatives");
  }
  if (!(config.sigma > 0.0) || !(config.center_prior_sd > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "sorting spreads must be positive");
  }
  if (!utilities.allFinite()) throw Error(ErrorCode::InvalidParameter, "utilities must be finite");

  auto model = std::make_shared<SortingModel>();
  model->clusters = config.clusters;
  model->sigma = config.sigma;
  model->prior_mean = config.center_prior_mean;
  model->prior_sd = config.center_prior_sd;
  model->lambda = config.lambda_prior.value_or(Eigen::VectorXd::Constant(config.clusters, 1.0 / config.clusters));
  if (model->lambda.size() != config.clusters || !(model->lambda.minCoeff() > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "lambda prior needs one positive entry per cluster");
  }

  ModelSpec spec;
  for (int z = 0; z < config.clusters; ++z) spec.layout.add_bounded(indexed("omega_hat", z), 0.0, 1.0);
  for (Eigen::Index i = 0; i < m; ++i) spec.layout.add_simplex(indexed("theta_hat", i), config.clusters);
  model->theta_offset = spec.layout.block("theta_hat[1]").offset;

  // Centers start at evenly spaced quantiles of the mean utilities, highest first.
  std::vector<double> sorted(static_cast<std::size_t>(m));
  const Eigen::VectorXd mean_u = utilities.colwise().mean().transpose();
  for (Eigen::Index i = 0; i < m; ++i) sorted[static_cast<std::size_t>(i)] = mean_u[i];
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  spec.initial = Eigen::VectorXd::Constant(spec.layout.constrained_size(), 1.0 / config.clusters);
  for (int z = 0; z < config.clusters; ++z) {
    const auto pos = static_cast<std::size_t>((z + 0.5) * static_cast<double>(m) / config.clusters);
    spec.initial[z] = std::clamp(sorted[std::min(pos, sorted.size() - 1)], kCenterMargin, 1.0 - kCenterMargin);
  }

  model->utilities = std::move(utilities);
  spec.log_density = [model](const Eigen::VectorXd& x) { return (*model)(x); };
  return spec;
}

// Reorders the clusters of every chain by `perm` (new z takes old perm[z]).
void permute_clusters(PosteriorSamples& samples, const std::vector<Eigen::Index>& perm) {
  const auto Z = static_cast<Eigen::Index>(perm.size());
  for (auto& draws : samples.chains) {
    const Eigen::MatrixXd src = draws;
    for (Eigen::Index z = 0; z < Z; ++z) {
      draws.col(samples.block(indexed("omega_hat", z)).offset) =
          src.col(samples.block(indexed("omega_hat", perm[static_cast<std::size_t>(z)])).offset);
    }
    for (Eigen::Index i = 0; samples.contains(indexed("theta_hat", i)); ++i) {
      const Eigen::Index off = samples.block(indexed("theta_hat", i)).offset;
      for (Eigen::Index z = 0; z < Z; ++z) draws.col(off + z) = src.col(off + perm[static_cast<std::size_t>(z)]);
    }
  }
}

}  // namespace

PerformanceMatrix PerformanceMatrix::from_values(std::vector<std::string> alternatives,
                                                 std::vector<std::string> criteria, Eigen::MatrixXd values) {
  if (values.rows() != static_cast<Eigen::Index>(alternatives.size()) ||
      values.cols() != static_cast<Eigen::Index>(criteria.size())) {
    throw Error(ErrorCode::DimensionMismatch, "performance matrix shape does not match its labels");
  }
  if (!(values.minCoeff() >= -1e-9 && values.maxCoeff() <= 1.0 + 1e-9)) {
    throw Error(ErrorCode::InvalidParameter, "performance values must be normalized to [0, 1]");
  }
  return {std::move(alternatives), std::move(criteria), std::move(values)};
}

double aggregate_wsm(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (a.size() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "performance row has " + std::to_string(a.size()) +
                                                  " criteria, weights have " + std::to_string(w.size()));
  }
  return a.dot(w);
}

Eigen::MatrixXd utility_samples(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                const Aggregator& g) {
  require_columns(weight_draws, perf.values.cols(), "weight draws");
  if (g.linear) return weight_draws * perf.values.transpose();
  Eigen::MatrixXd out(weight_draws.rows(), perf.values.rows());
  for (Eigen::Index q = 0; q < weight_draws.rows(); ++q) {
    const Eigen::VectorXd w = weight_draws.row(q).transpose();
    for (Eigen::Index i = 0; i < perf.values.rows(); ++i) out(q, i) = g.apply(perf.values.row(i).transpose(), w);
  }
  return out;
}

Eigen::VectorXd expected_utility(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                 const Aggregator& g) {
  require_columns(weight_draws, perf.values.cols(), "weight draws");
  if (g.linear) {
    const Eigen::VectorXd mean_w = weight_draws.colwise().mean().transpose();
    Eigen::VectorXd out(perf.values.rows());
    for (Eigen::Index i = 0; i < perf.values.rows(); ++i) out[i] = g.apply(perf.values.row(i).transpose(), mean_w);
    return out;
  }
  return utility_samples(perf, weight_draws, g).colwise().mean().transpose();
}

double expected_utility_distributional(const Eigen::MatrixXd& performance_draws, const Eigen::MatrixXd& weight_draws,
                                       const Aggregator& g) {
  require_columns(weight_draws, performance_draws.cols(), "weight draws");
  require_columns(performance_draws, weight_draws.cols(), "performance draws");
  if (g.linear) {
    return g.apply(performance_draws.colwise().mean().transpose(), weight_draws.colwise().mean().transpose());
  }
  double total = 0.0;
  for (Eigen::Index a = 0; a < performance_draws.rows(); ++a) {
    const Eigen::VectorXd row = performance_draws.row(a).transpose();
    for (Eigen::Index q = 0; q < weight_draws.rows(); ++q) total += g.apply(row, weight_draws.row(q).transpose());
  }
  return total / (static_cast<double>(performance_draws.rows()) * static_cast<double>(weight_draws.rows()));
}

CredalRanking alternative_credal(const PerformanceMatrix& perf, const Eigen::MatrixXd& weight_draws,
                                 const Aggregator& g) {
  return credal_ranking(utility_samples(perf, weight_draws, g), perf.alternatives);
}

ModelSpec build_sorting_posterior(const Eigen::VectorXd& utilities, const SortingConfig& config) {
  return sorting_spec(utilities.transpose(), config);
}

ModelSpec build_sorting_posterior(const Eigen::MatrixXd& utility_draws, const SortingConfig& config) {
  if (utility_draws.rows() == 0) throw Error(ErrorCode::EmptyInput, "no utility draws");
  const Eigen::Index keep = std::min(utility_draws.rows(), kMaxAveragedDraws);
  Eigen::MatrixXd thinned(keep, utility_draws.cols());
  for (Eigen::Index k = 0; k < keep; ++k) thinned.row(k) = utility_draws.row(k * utility_draws.rows() / keep);
  return sorting_spec(std::move(thinned), config);
}

SortingResult summarize_sorting(const PosteriorSamples& samples, const Eigen::VectorXd& utilities, double sigma) {
  SortingResult result;
  result.samples = relabel_chains(samples);
  const int Z = component_count(result.samples);
  if (Z < 1 || !result.samples.contains("omega_hat[1]")) {
    throw Error(ErrorCode::LayoutMismatch, "samples do not come from a sorting model");
  }
  Eigen::VectorXd centers(Z);
  for (int z = 0; z < Z; ++z) centers[z] = result.samples.pooled(indexed("omega_hat", z)).mean();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(Z));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) { return centers[a] > centers[b]; });
  permute_clusters(result.samples, perm);
  result.centers.resize(Z);
  for (int z = 0; z < Z; ++z) result.centers[z] = centers[perm[static_cast<std::size_t>(z)]];

  const Eigen::Index m = utilities.size();
  result.memberships = Eigen::MatrixXd::Zero(m, Z);
  Eigen::VectorXd log_p(Z);
  long long count = 0;
  for (const auto& draws : result.samples.chains) {
    for (Eigen::Index q = 0; q < draws.rows(); ++q) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index th = result.samples.block(indexed("theta_hat", i)).offset;
        for (int z = 0; z < Z; ++z) {
          const double center = draws(q, result.samples.block(indexed("omega_hat", z)).offset);
          log_p[z] = std::log(draws(q, th + z)) + log_normal_pdf(utilities[i], center, sigma);
        }
        result.memberships.row(i) += (log_p.array() - log_sum_exp(log_p)).exp().matrix().transpose();
      }
      ++count;
    }
  }
  if (count > 0) result.memberships /= static_cast<double>(count);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index best = 0;
    result.memberships.row(i).maxCoeff(&best);
    result.assignment.push_back(static_cast<int>(best));
  }
  return result;
}

}  // namespace credal_mcdm
