#include "credal_mcdm/mixture_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/error.hpp"
#include "record_term.hpp"

namespace credal_mcdm {

namespace {

constexpr double kInitialConcentration = 10.0;
constexpr double kInitialMembership = 0.8;

std::string indexed(const char* base, std::size_t k) { return std::string(base) + "[" + std::to_string(k + 1) + "]"; }

struct MixtureModel {
  Eigen::Index n = 0;
  int clusters = 1;
  Eigen::VectorXd lambda;
  Eigen::VectorXd delta;
  GammaPrior gamma_prior;
  std::vector<Eigen::Index> omega;
  std::vector<Eigen::Index> gamma;
  std::vector<Eigen::Index> w;
  std::vector<Eigen::Index> theta;
  std::vector<detail::RecordTerm> terms;

  double operator()(const Eigen::VectorXd& x) const {
    const auto gamma_density = ScalarDistribution::gamma(gamma_prior.shape, gamma_prior.rate);
    double lp = 0.0;
    for (int z = 0; z < clusters; ++z) {
      const auto center = x.segment(omega[static_cast<std::size_t>(z)], n);
      const double conc = x[gamma[static_cast<std::size_t>(z)]];
      if (!(center.minCoeff() > 0.0) || !(conc > 0.0)) return kNegInf;
      lp += log_dirichlet(center, delta) + scalar_log_density(gamma_density, conc);
    }
    if (!std::isfinite(lp)) return kNegInf;

    Eigen::VectorXd component(clusters);
    for (std::size_t r = 0; r < terms.size(); ++r) {
      const auto wr = x.segment(w[r], n);
      const auto th = x.segment(theta[r], clusters);
      if (!(wr.minCoeff() > 0.0) || !(th.minCoeff() > 0.0)) return kNegInf;
      if (clusters > 1) lp += log_dirichlet(th, lambda);
      for (int z = 0; z < clusters; ++z) {
        component[z] = std::log(th[z]) + log_dirichlet_mean(wr, x.segment(omega[static_cast<std::size_t>(z)], n),
                                                            x[gamma[static_cast<std::size_t>(z)]]);
      }
      lp += log_sum_exp(component);
      lp += terms[r](x, wr);
      if (!std::isfinite(lp)) return kNegInf;
    }
    return lp;
  }
};

Eigen::VectorXd prior_or(const std::optional<Eigen::VectorXd>& given, Eigen::Index size, const char* what) {
  if (!given) return Eigen::VectorXd::Constant(size, 0.01);
  if (given->size() != size) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has the wrong length");
  if (!(given->minCoeff() > 0.0)) throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be positive");
  return *given;
}

// Farthest-point choice of Z records, starting from the first.
std::vector<std::size_t> seed_records(const std::vector<Eigen::VectorXd>& rough, int clusters) {
  std::vector<std::size_t> chosen{0};
  std::vector<double> dist(rough.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(chosen.size()) < clusters) {
    const Eigen::VectorXd& last = rough[chosen.back()];
    std::size_t best = 0;
    double best_dist = -1.0;
    for (std::size_t r = 0; r < rough.size(); ++r) {
      dist[r] = std::min(dist[r], (clr_values(rough[r]) - clr_values(last)).norm());
      if (dist[r] > best_dist) {
        best_dist = dist[r];
        best = r;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

// How components appear in a sample set.
struct ComponentBlocks {
  std::vector<std::string> centers;
  std::vector<std::string> attached;  // other per-component blocks, Z each, in order
  std::vector<std::string> memberships;
};

ComponentBlocks component_blocks(const PosteriorSamples& samples) {
  ComponentBlocks out;
  const char* center = samples.contains("omega[1]") ? "omega" : (samples.contains("omega_hat[1]") ? "omega_hat" : nullptr);
  if (center == nullptr) throw Error(ErrorCode::LayoutMismatch, "samples do not come from a mixture model");
  const bool sorting = std::string(center) == "omega_hat";
  for (std::size_t z = 0; samples.contains(indexed(center, z)); ++z) {
    out.centers.push_back(indexed(center, z));
    if (!sorting) out.attached.push_back(indexed("gamma_omega", z));
  }
  const char* membership = sorting ? "theta_hat" : "theta";
  for (std::size_t r = 0; samples.contains(indexed(membership, r)); ++r) {
    out.memberships.push_back(indexed(membership, r));
  }
  return out;
}

Eigen::MatrixXd center_means(const PosteriorSamples& samples, const ComponentBlocks& blocks, std::size_t chain) {
  const auto& draws = samples.chains[chain];
  const ParameterBlock& first = samples.block(blocks.centers.front());
  Eigen::MatrixXd means(static_cast<Eigen::Index>(blocks.centers.size()), first.size);
  for (std::size_t z = 0; z < blocks.centers.size(); ++z) {
    const ParameterBlock& b = samples.block(blocks.centers[z]);
    means.row(static_cast<Eigen::Index>(z)) = draws.middleCols(b.offset, b.size).colwise().mean();
  }
  return means;
}

}  // namespace

ModelSpec build_mixture_posterior(const std::vector<PreferenceRecord>& records, const MixtureConfig& config) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no preference records");
  if (config.clusters < 1) throw Error(ErrorCode::InvalidParameter, "need at least one cluster");
  if (static_cast<std::size_t>(config.clusters) > records.size()) {
    throw Error(ErrorCode::TooManyClusters, std::to_string(config.clusters) + " clusters for " +
                                                std::to_string(records.size()) + " decision-makers");
  }
  const Eigen::Index n = records.front().criteria_count();
  for (const auto& r : records) {
    if (r.criteria_count() != n) {
      throw Error(ErrorCode::MixedCriteriaCount, "DM '" + r.dm_id + "' rates " + std::to_string(r.criteria_count()) +
                                                     " criteria, expected " + std::to_string(n));
    }
    validate(r);
  }
  if (!(config.gamma_prior.shape > 0.0 && config.gamma_prior.rate > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gamma prior needs shape, rate > 0");
  }

  auto model = std::make_shared<MixtureModel>();
  model->n = n;
  model->clusters = config.clusters;
  model->lambda = prior_or(config.lambda_prior, config.clusters, "lambda prior");
  model->delta = prior_or(config.delta_prior, n, "delta prior");
  model->gamma_prior = config.gamma_prior;

  ModelSpec spec;
  const auto Z = static_cast<std::size_t>(config.clusters);
  for (std::size_t z = 0; z < Z; ++z) {
    spec.layout.add_simplex(indexed("omega", z), n);
    spec.layout.add_positive(indexed("gamma_omega", z));
    model->omega.push_back(spec.layout.block(indexed("omega", z)).offset);
    model->gamma.push_back(spec.layout.block(indexed("gamma_omega", z)).offset);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    spec.layout.add_simplex(indexed("w", r), n);
    model->w.push_back(spec.layout.block(indexed("w", r)).offset);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    spec.layout.add_simplex(indexed("theta", r), config.clusters);
    model->theta.push_back(spec.layout.block(indexed("theta", r)).offset);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    model->terms.emplace_back(records[r], static_cast<int>(r + 1), spec.layout, config.gamma_prior,
                              config.strict_paper_bwm, spec.warnings);
  }

  std::vector<Eigen::VectorXd> rough;
  for (const auto& r : records) {
    // Keep starting compositions away from the simplex boundary.
    const Eigen::VectorXd w = detail::rough_weights(r).array() + 0.01;
    rough.push_back(w / w.sum());
  }
  const auto seeds = seed_records(rough, config.clusters);
  spec.initial = Eigen::VectorXd::Ones(spec.layout.constrained_size());
  for (std::size_t z = 0; z < Z; ++z) spec.initial.segment(model->omega[z], n) = rough[seeds[z]];
  for (std::size_t z = 0; z < Z; ++z) spec.initial[model->gamma[z]] = kInitialConcentration;
  for (std::size_t r = 0; r < records.size(); ++r) {
    spec.initial.segment(model->w[r], n) = rough[r];
    // Most of each membership on the nearest seeded component.
    std::size_t nearest = 0;
    for (std::size_t z = 1; z < Z; ++z) {
      if ((clr_values(rough[r]) - clr_values(rough[seeds[z]])).norm() <
          (clr_values(rough[r]) - clr_values(rough[seeds[nearest]])).norm()) {
        nearest = z;
      }
    }
    auto th = spec.initial.segment(model->theta[r], config.clusters);
    if (Z == 1) {
      th.setOnes();
    } else {
      th.setConstant((1.0 - kInitialMembership) / static_cast<double>(Z - 1));
      th[static_cast<Eigen::Index>(nearest)] = kInitialMembership;
    }
  }
  for (const auto& term : model->terms) term.initialize(spec.initial);

  spec.log_density = [model](const Eigen::VectorXd& x) { return (*model)(x); };
  return spec;
}

double marginal_mixture_logdensity(const Eigen::VectorXd& w, const Eigen::VectorXd& theta,
                                   const std::vector<Eigen::VectorXd>& centers,
                                   const Eigen::VectorXd& concentrations) {
  const auto Z = static_cast<Eigen::Index>(centers.size());
  if (theta.size() != Z || concentrations.size() != Z || Z == 0) {
    throw Error(ErrorCode::DimensionMismatch, "theta, centers and concentrations must have one entry per component");
  }
  Eigen::VectorXd terms(Z);
  for (Eigen::Index z = 0; z < Z; ++z) {
    const auto& center = centers[static_cast<std::size_t>(z)];
    if (center.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "component center has the wrong length");
    terms[z] = theta[z] > 0.0 ? std::log(theta[z]) + log_dirichlet_mean(w, center, concentrations[z]) : kNegInf;
  }
  return log_sum_exp(terms);
}

int component_count(const PosteriorSamples& samples) {
  if (!samples.contains("omega[1]") && !samples.contains("omega_hat[1]")) return 0;
  return static_cast<int>(component_blocks(samples).centers.size());
}

PosteriorSamples relabel_chains(const PosteriorSamples& samples) {
  const ComponentBlocks blocks = component_blocks(samples);
  const int Z = static_cast<int>(blocks.centers.size());
  if (Z > kMaxRelabelClusters) {
    throw Error(ErrorCode::ClusterCountTooLarge,
                std::to_string(Z) + " components; relabelling supports at most " + std::to_string(kMaxRelabelClusters));
  }
  PosteriorSamples out = samples;
  if (Z < 2 || samples.num_chains() < 2) return out;

  const Eigen::MatrixXd reference = center_means(samples, blocks, 0);
  const std::size_t groups = blocks.attached.size() / static_cast<std::size_t>(Z);
  for (std::size_t c = 1; c < samples.chains.size(); ++c) {
    const Eigen::MatrixXd means = center_means(samples, blocks, c);
    std::vector<int> perm(static_cast<std::size_t>(Z));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int z = 0; z < Z; ++z) cost += (means.row(perm[static_cast<std::size_t>(z)]) - reference.row(z)).norm();
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    const Eigen::MatrixXd& src = samples.chains[c];
    Eigen::MatrixXd& dst = out.chains[c];
    auto move_block = [&](const std::string& to, const std::string& from) {
      const ParameterBlock& t = samples.block(to);
      const ParameterBlock& f = samples.block(from);
      dst.middleCols(t.offset, t.size) = src.middleCols(f.offset, f.size);
    };
    for (std::size_t z = 0; z < static_cast<std::size_t>(Z); ++z) {
      const auto from = static_cast<std::size_t>(best[z]);
      move_block(blocks.centers[z], blocks.centers[from]);
      for (std::size_t g = 0; g < groups; ++g) {
        move_block(blocks.attached[g * static_cast<std::size_t>(Z) + z],
                   blocks.attached[g * static_cast<std::size_t>(Z) + from]);
      }
    }
    for (const auto& name : blocks.memberships) {
      const ParameterBlock& b = samples.block(name);
      for (Eigen::Index z = 0; z < Z; ++z) dst.col(b.offset + z) = src.col(b.offset + best[static_cast<std::size_t>(z)]);
    }
  }
  return out;
}

Eigen::MatrixXd responsibilities(const PosteriorSamples& samples) {
  const ComponentBlocks blocks = component_blocks(samples);
  if (!samples.contains("gamma_omega[1]")) {
    throw Error(ErrorCode::LayoutMismatch, "responsibilities need DM mixture samples");
  }
  const auto Z = static_cast<Eigen::Index>(blocks.centers.size());
  const auto R = static_cast<Eigen::Index>(blocks.memberships.size());
  const Eigen::Index n = samples.block(blocks.centers.front()).size;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(R, Z);
  Eigen::VectorXd log_p(Z);
  std::vector<Eigen::VectorXd> centers(static_cast<std::size_t>(Z));
  Eigen::VectorXd conc(Z);
  long long count = 0;
  for (const auto& draws : samples.chains) {
    for (Eigen::Index q = 0; q < draws.rows(); ++q) {
      for (Eigen::Index z = 0; z < Z; ++z) {
        centers[static_cast<std::size_t>(z)] =
            draws.row(q).segment(samples.block(blocks.centers[static_cast<std::size_t>(z)]).offset, n).transpose();
        conc[z] = draws(q, samples.block(blocks.attached[static_cast<std::size_t>(z)]).offset);
      }
      for (Eigen::Index r = 0; r < R; ++r) {
        const Eigen::VectorXd w = draws.row(q).segment(samples.block(indexed("w", static_cast<std::size_t>(r))).offset, n).transpose();
        const Eigen::Index th = samples.block(blocks.memberships[static_cast<std::size_t>(r)]).offset;
        for (Eigen::Index z = 0; z < Z; ++z) {
          const double t = draws(q, th + z);
          log_p[z] = t > 0.0 ? std::log(t) + log_dirichlet_mean(w, centers[static_cast<std::size_t>(z)], conc[z]) : kNegInf;
        }
        const double norm = log_sum_exp(log_p);
        sum.row(r) += (log_p.array() - norm).exp().matrix().transpose();
      }
      ++count;
    }
  }
  return count > 0 ? Eigen::MatrixXd(sum / static_cast<double>(count)) : sum;
}

MixtureResult summarize_mixture(const PosteriorSamples& samples) {
  MixtureResult result;
  result.samples = relabel_chains(samples);
  const ComponentBlocks blocks = component_blocks(result.samples);
  const auto Z = static_cast<Eigen::Index>(blocks.centers.size());
  const Eigen::Index n = result.samples.block(blocks.centers.front()).size;
  result.centers.resize(Z, n);
  result.concentrations.resize(Z);
  for (Eigen::Index z = 0; z < Z; ++z) {
    result.centers.row(z) = result.samples.pooled(blocks.centers[static_cast<std::size_t>(z)]).colwise().mean();
    result.concentrations[z] = result.samples.pooled(blocks.attached[static_cast<std::size_t>(z)]).mean();
  }
  result.memberships = responsibilities(result.samples);
  return result;
}

}  // namespace credal_mcdm
