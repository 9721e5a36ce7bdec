#include "credal_mcdm/group_model.hpp"

#include <cmath>
#include <memory>

#include "credal_mcdm/compositions.hpp"
#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/error.hpp"
#include "record_term.hpp"

namespace credal_mcdm {

namespace likelihood {

double value_vector(const Eigen::VectorXd& values, const Eigen::VectorXd& w) {
  return log_multinomial(values, w, Orientation::direct);
}

double value_vector_dirichlet(const Eigen::VectorXd& values, const Eigen::VectorXd& w, double gamma) {
  return log_dirichlet_mean((values / values.sum()).eval(), w, gamma);
}

double bwm(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst, const Eigen::VectorXd& w) {
  return log_multinomial(others_to_worst, w, Orientation::direct) +
         log_multinomial(best_to_others, w, Orientation::inverse);
}

double bwm_dirichlet(const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst,
                     const Eigen::VectorXd& w, double gamma, bool strict_paper) {
  const Eigen::VectorXd worst_part = others_to_worst / others_to_worst.sum();
  const Eigen::VectorXd best_part = best_to_others / best_to_others.sum();
  double lp = log_dirichlet_mean(worst_part, w, gamma);
  if (strict_paper) {
    lp += log_dirichlet_mean(best_part, w, gamma);
  } else {
    const Eigen::VectorXd inverse = w.cwiseInverse();
    lp += log_dirichlet_mean(best_part, (inverse / inverse.sum()).eval(), gamma);
  }
  return lp;
}

double ahp(const Eigen::MatrixXd& pcm, const Eigen::VectorXd& w, double gamma) {
  if (pcm.rows() != pcm.cols() || pcm.rows() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pairwise comparison matrix does not match the weight vector");
  }
  if (!(pcm.minCoeff() > 0.0)) {
    throw Error(ErrorCode::NonPositivePcmEntry, "pairwise comparison entries must be positive");
  }
  double lp = 0.0;
  for (Eigen::Index j = 0; j < pcm.cols(); ++j) {
    lp += log_dirichlet_mean((pcm.col(j) / pcm.col(j).sum()).eval(), w, gamma);
  }
  return lp;
}

}  // namespace likelihood

namespace {

Eigen::Index common_criteria_count(const std::vector<PreferenceRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no preference records");
  const Eigen::Index n = records.front().criteria_count();
  for (const auto& r : records) {
    if (r.criteria_count() != n) {
      throw Error(ErrorCode::MixedCriteriaCount, "DM '" + r.dm_id + "' rates " + std::to_string(r.criteria_count()) +
                                                     " criteria, expected " + std::to_string(n));
    }
    validate(r);
  }
  return n;
}

Eigen::VectorXd default_vector(const std::optional<Eigen::VectorXd>& given, Eigen::Index n, const char* what) {
  if (!given) return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (given->size() != n) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has the wrong length");
  return *given;
}

struct GroupModel {
  Eigen::Index n = 0;
  bool aggregate = false;
  bool logistic_normal = false;
  GammaPrior gamma_prior;
  Eigen::VectorXd alpha;
  Eigen::VectorXd mu;
  std::unique_ptr<GaussianLogDensity> gaussian;
  std::unique_ptr<GaussianLogDensity> center_prior;
  Eigen::Index w_star = -1;
  Eigen::Index gamma_star = -1;
  std::vector<Eigen::Index> w;
  std::vector<detail::RecordTerm> terms;

  double operator()(const Eigen::VectorXd& x) const {
    double lp = 0.0;
    if (aggregate) {
      const auto center = x.segment(w_star, n);
      if (logistic_normal) {
        lp += (*center_prior)(center, mu);
        for (const Eigen::Index offset : w) {
          const auto wr = x.segment(offset, n);
          if (!(wr.minCoeff() > 0.0)) return kNegInf;
          lp += (*gaussian)(clr_values(wr), center);
        }
      } else {
        const double concentration = x[gamma_star];
        lp += log_dirichlet(center, alpha);
        lp += scalar_log_density(ScalarDistribution::gamma(gamma_prior.shape, gamma_prior.rate), concentration);
        if (!std::isfinite(lp) || !(center.minCoeff() > 0.0)) return kNegInf;
        for (const Eigen::Index offset : w) lp += log_dirichlet_mean(x.segment(offset, n), center, concentration);
      }
      if (!std::isfinite(lp)) return kNegInf;
    }
    for (std::size_t r = 0; r < terms.size(); ++r) {
      const auto wr = x.segment(w[r], n);
      if (!(wr.minCoeff() > 0.0)) return kNegInf;
      lp += terms[r](x, wr);
      if (!std::isfinite(lp)) return kNegInf;
    }
    return lp;
  }
};

}  // namespace

ModelSpec build_group_posterior(const std::vector<PreferenceRecord>& records, const GroupConfig& config) {
  const Eigen::Index n = common_criteria_count(records);
  auto model = std::make_shared<GroupModel>();
  model->n = n;
  model->aggregate = records.size() > 1;
  model->gamma_prior = config.gamma_prior;
  if (!(config.gamma_prior.shape > 0.0 && config.gamma_prior.rate > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gamma prior needs shape, rate > 0");
  }

  ModelSpec spec;
  if (model->aggregate) {
    if (const auto* ln = std::get_if<LogisticNormalAggregation>(&config.aggregation)) {
      if (ln->covariance.rows() != n || ln->covariance.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "covariance must be " + std::to_string(n) + "x" + std::to_string(n));
      }
      if (!ln->covariance.isApprox(ln->covariance.transpose(), 1e-12)) {
        throw Error(ErrorCode::InvalidParameter, "covariance must be symmetric");
      }
      model->logistic_normal = true;
      model->gaussian = std::make_unique<GaussianLogDensity>(ln->covariance);
      const Eigen::MatrixXd prior_cov = ln->prior_covariance.value_or(Eigen::MatrixXd::Identity(n, n));
      if (prior_cov.rows() != n || prior_cov.cols() != n || !prior_cov.isApprox(prior_cov.transpose(), 1e-12)) {
        throw Error(ErrorCode::InvalidParameter, "prior covariance must be a symmetric " + std::to_string(n) + "x" +
                                                     std::to_string(n) + " matrix");
      }
      model->center_prior = std::make_unique<GaussianLogDensity>(prior_cov);
      model->mu = default_vector(config.mu_prior, n, "mu prior");
      spec.layout.add_real_vector("w_star_clr", n);
      model->w_star = spec.layout.block("w_star_clr").offset;
      spec.report.push_back(ReportRule{"w_star_clr", "w_star", ReportRule::Transform::clr_inverse});
    } else {
      model->alpha = default_vector(config.alpha_prior, n, "alpha prior");
      if (!(model->alpha.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha prior must be positive");
      spec.layout.add_simplex("w_star", n);
      spec.layout.add_positive("gamma_star");
      model->w_star = spec.layout.block("w_star").offset;
      model->gamma_star = spec.layout.block("gamma_star").offset;
    }
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::string name = "w[" + std::to_string(r + 1) + "]";
    spec.layout.add_simplex(name, n);
    model->w.push_back(spec.layout.block(name).offset);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    model->terms.emplace_back(records[r], static_cast<int>(r + 1), spec.layout, config.gamma_prior,
                              config.strict_paper_bwm, spec.warnings);
  }

  spec.initial = Eigen::VectorXd::Ones(spec.layout.constrained_size());
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (model->aggregate) {
    if (model->logistic_normal) {
      spec.initial.segment(model->w_star, n).setZero();
    } else {
      spec.initial.segment(model->w_star, n) = uniform;
    }
  }
  for (const Eigen::Index offset : model->w) spec.initial.segment(offset, n) = uniform;
  for (const auto& term : model->terms) term.initialize(spec.initial);

  if (model->aggregate) {
    // Move the center and every member by the same log-ratio step, once per
    // part; the last part is moved by shifting all the others down.
    const ParameterBlock& center = spec.layout.block(model->logistic_normal ? "w_star_clr" : "w_star");
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(spec.layout.unconstrained_size());
      if (model->logistic_normal) {
        d[center.free_offset + k] = 1.0;
      } else if (k < n - 1) {
        d[center.free_offset + k] = 1.0;
      } else {
        d.segment(center.free_offset, n - 1).setConstant(-1.0);
      }
      for (std::size_t r = 0; r < records.size(); ++r) {
        const ParameterBlock& b = spec.layout.block("w[" + std::to_string(r + 1) + "]");
        if (k < n - 1) {
          d[b.free_offset + k] = 1.0;
        } else {
          d.segment(b.free_offset, n - 1).setConstant(-1.0);
        }
      }
      spec.joint_moves.push_back(std::move(d));
    }
  }

  spec.log_density = [model](const Eigen::VectorXd& x) { return (*model)(x); };
  return spec;
}

Eigen::MatrixXd covariance_from_performance(const Eigen::MatrixXd& performance) {
  if (performance.rows() < 2) throw Error(ErrorCode::TooFewRows, "correlation needs at least two alternatives");
  const Eigen::Index n = performance.cols();
  const Eigen::MatrixXd centered = performance.rowwise() - performance.colwise().mean();
  const Eigen::VectorXd norms = centered.colwise().norm();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double denom = norms[i] * norms[j];
      const double r = denom > 0.0 ? centered.col(i).dot(centered.col(j)) / denom : 0.0;
      corr(i, j) = corr(j, i) = r;
    }
  }
  return corr;
}

}  // namespace credal_mcdm
