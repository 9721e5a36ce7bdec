#pragma once

// Adaptive random-walk Metropolis over a ModelSpec, plus convergence
// diagnostics and posterior summaries.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/model_spec.hpp"

namespace credal_mcdm {

struct SamplerConfig {
  int chains = 4;
  int warmup = 2000;
  int draws = 2000;
  std::uint64_t seed = 1;
  double target_acceptance = 0.30;
  int adapt_window = 50;
  // Run chains on separate threads. Output does not depend on this flag.
  bool parallel = true;
};

struct ChainInfo {
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;  // post-warmup, over all coordinate proposals
};

/// Draws in constrained space, one matrix (iterations x columns) per chain.
/// `blocks` describes the columns; derived report blocks come last.
struct PosteriorSamples {
  std::vector<ParameterBlock> blocks;
  std::vector<Eigen::MatrixXd> chains;
  std::vector<ChainInfo> chain_info;
  SamplerConfig config;

  Eigen::Index num_chains() const noexcept { return static_cast<Eigen::Index>(chains.size()); }
  Eigen::Index num_draws() const noexcept { return chains.empty() ? 0 : chains.front().rows(); }
  Eigen::Index num_columns() const noexcept { return chains.empty() ? 0 : chains.front().cols(); }

  std::vector<std::string> column_names() const;
  const ParameterBlock& block(std::string_view name) const;
  bool contains(std::string_view name) const noexcept;
  Eigen::Index column_index(std::string_view column_name) const;

  /// All draws of a block, chains stacked in order: (chains * draws) x size.
  Eigen::MatrixXd pooled(std::string_view block_name) const;
  /// One column across chains: draws x chains.
  Eigen::MatrixXd column(Eigen::Index index) const;
};

/// Deterministic per-chain seed: splitmix64 hash of (seed, chain).
std::uint64_t chain_seed(std::uint64_t seed, int chain);

/// Each iteration sweeps all unconstrained coordinates with one-dimensional
/// Gaussian random-walk proposals, followed by one proposal along each
/// simplex block's all-ones direction and each of model.joint_moves. During
/// warmup every move's scale is adapted every adapt_window iterations toward
/// target_acceptance; scales are frozen afterwards. Identical (model, config)
/// give bit-identical draws.
PosteriorSamples sample(const ModelSpec& model, const SamplerConfig& config);

/// Appends the model's report blocks (e.g. w_star from w_star_clr).
void apply_report_rules(PosteriorSamples& samples, const std::vector<ReportRule>& rules);

/// Split-chain potential scale reduction factor. NaN for a constant column.
double rhat(const PosteriorSamples& samples, Eigen::Index column);
double rhat(const PosteriorSamples& samples, std::string_view column_name);
/// Raw (draws x chains) overloads for diagnostics on constructed chains.
double rhat(const Eigen::MatrixXd& draws_by_chain);

/// Multi-chain effective sample size with the autocorrelation sum truncated
/// at the first negative pair. NaN for a constant column.
double ess(const PosteriorSamples& samples, Eigen::Index column);
double ess(const PosteriorSamples& samples, std::string_view column_name);
double ess(const Eigen::MatrixXd& draws_by_chain);

struct SummaryRow {
  std::string parameter;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  double rhat = 0.0;
  double ess = 0.0;
};

/// Linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

std::vector<SummaryRow> summarize(const PosteriorSamples& samples);

}  // namespace credal_mcdm
