#pragma once

// Finite mixture over decision-makers' weights: each DM's weights are drawn
// from one of Z Dirichlet components, with the membership summed out.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/group_model.hpp"
#include "credal_mcdm/model_spec.hpp"
#include "credal_mcdm/preferences.hpp"
#include "credal_mcdm/sampler.hpp"

namespace credal_mcdm {

inline constexpr int kMaxRelabelClusters = 6;

struct MixtureConfig {
  int clusters = 2;
  std::optional<Eigen::VectorXd> lambda_prior;  // theta[r] ~ Dir(lambda), defaults to 0.01 entries
  std::optional<Eigen::VectorXd> delta_prior;   // omega[z] ~ Dir(delta), defaults to 0.01 entries
  GammaPrior gamma_prior;
  bool strict_paper_bwm = false;
};

/// Parameter blocks: omega[z] (simplex, n), gamma_omega[z], w[r], theta[r]
/// (simplex, Z), then per-record gamma[r] and latents as in the group model.
///
/// Components start at the rough weights of records chosen by farthest-point
/// seeding, so chains begin with distinct, comparably labelled components.
ModelSpec build_mixture_posterior(const std::vector<PreferenceRecord>& records, const MixtureConfig& config);

/// log sum_z theta_z Dir(w | concentrations_z * centers_z). Components with
/// theta_z = 0 drop out.
double marginal_mixture_logdensity(const Eigen::VectorXd& w, const Eigen::VectorXd& theta,
                                   const std::vector<Eigen::VectorXd>& centers,
                                   const Eigen::VectorXd& concentrations);

/// Undo label switching between chains: each chain's components are permuted
/// to minimise the summed Euclidean distance between its component means and
/// those of chain 0. Works on DM mixtures (omega[z]) and sorting fits
/// (omega_hat[z]).
PosteriorSamples relabel_chains(const PosteriorSamples& samples);

/// R x Z posterior membership probabilities, averaged over all draws. Call
/// on relabelled samples.
Eigen::MatrixXd responsibilities(const PosteriorSamples& samples);

struct MixtureResult {
  PosteriorSamples samples;      // relabelled
  Eigen::MatrixXd centers;       // Z x n posterior means of omega[z]
  Eigen::VectorXd concentrations;
  Eigen::MatrixXd memberships;   // R x Z
};

MixtureResult summarize_mixture(const PosteriorSamples& samples);

/// Number of mixture components in a sample set; 0 if it is not a mixture.
int component_count(const PosteriorSamples& samples);

}  // namespace credal_mcdm
