#include "record_term.hpp"

#include <cmath>

#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/error.hpp"

namespace credal_mcdm::detail {

namespace {

bool all_integer_points(const std::vector<UncertainValue>& values) {
  for (const auto& v : values) {
    if (!v.is_point() || std::abs(v.first - std::round(v.first)) > 1e-9) return false;
  }
  return true;
}

bool all_points(const std::vector<UncertainValue>& values) {
  for (const auto& v : values) {
    if (!v.is_point()) return false;
  }
  return true;
}

std::string indexed(const std::string& base, int record, Eigen::Index j) {
  return base + "[" + std::to_string(record) + "][" + std::to_string(j + 1) + "]";
}

}  // namespace

Eigen::VectorXd rough_weights(const PreferenceRecord& record) {
  const Eigen::Index n = record.criteria_count();
  Eigen::VectorXd log_w = Eigen::VectorXd::Zero(n);
  if (const auto* m = std::get_if<PairwiseMatrix>(&record.payload)) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double l = std::log(m->at(i, j).initial_value());
        log_w[i] += l / static_cast<double>(n);
        log_w[j] -= l / static_cast<double>(n);
      }
    }
  } else if (const auto* b = std::get_if<BestWorst>(&record.payload)) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto k = static_cast<std::size_t>(j);
      log_w[j] = 0.5 * (std::log(b->others_to_worst[k].initial_value()) - std::log(b->best_to_others[k].initial_value()));
    }
  } else {
    const auto& v = std::get<ValueVector>(record.payload);
    for (Eigen::Index j = 0; j < n; ++j) {
      log_w[j] = std::log(std::max(v.values[static_cast<std::size_t>(j)].initial_value(), 1e-3));
    }
  }
  const Eigen::VectorXd w = (log_w.array() - log_w.maxCoeff()).exp().matrix();
  return w / w.sum();
}

RecordTerm::RecordTerm(const PreferenceRecord& record, int index, ParameterLayout& layout, GammaPrior gamma_prior,
                       bool strict_paper_bwm, std::vector<std::string>& warnings)
    : size_(record.criteria_count()), strict_paper_bwm_(strict_paper_bwm), gamma_prior_(gamma_prior) {
  const std::string gamma_name = "gamma[" + std::to_string(index) + "]";
  auto add_gamma = [&] {
    layout.add_positive(gamma_name);
    gamma_param_ = layout.block(gamma_name).offset;
  };

  if (const auto* m = std::get_if<PairwiseMatrix>(&record.payload)) {
    payload_ = Payload::pcm;
    add_gamma();
    for (Eigen::Index i = 0; i < size_; ++i) {
      for (Eigen::Index j = i + 1; j < size_; ++j) {
        const std::string name = "m[" + std::to_string(index) + "][" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + "]";
        first_.push_back(register_value(m->at(i, j), name, layout));
      }
    }
    return;
  }

  if (const auto* b = std::get_if<BestWorst>(&record.payload)) {
    payload_ = Payload::bwm;
    multinomial_ = all_integer_points(b->best_to_others) && all_integer_points(b->others_to_worst);
    if (!multinomial_ && all_points(b->best_to_others) && all_points(b->others_to_worst)) {
      warnings.push_back("NonIntegerCounts: DM '" + record.dm_id +
                         "' has non-integer best-worst judgements; using the Dirichlet likelihood");
    }
    if (!multinomial_) add_gamma();
    for (Eigen::Index j = 0; j < size_; ++j) {
      first_.push_back(register_value(b->best_to_others[static_cast<std::size_t>(j)],
                                      indexed("a_best", index, j), layout));
    }
    for (Eigen::Index j = 0; j < size_; ++j) {
      second_.push_back(register_value(b->others_to_worst[static_cast<std::size_t>(j)],
                                       indexed("a_worst", index, j), layout));
    }
    return;
  }

  const auto& v = std::get<ValueVector>(record.payload);
  payload_ = Payload::values;
  multinomial_ = all_integer_points(v.values);
  if (!multinomial_ && all_points(v.values)) {
    warnings.push_back("NonIntegerCounts: DM '" + record.dm_id +
                       "' has non-integer ratings; using the Dirichlet likelihood");
  }
  if (!multinomial_) add_gamma();
  for (Eigen::Index j = 0; j < size_; ++j) {
    first_.push_back(register_value(v.values[static_cast<std::size_t>(j)], indexed("a", index, j), layout));
  }
}

RecordTerm::Source RecordTerm::register_value(const UncertainValue& v, const std::string& name,
                                              ParameterLayout& layout) {
  if (v.is_point()) return Source{v.first, -1};
  if (v.is_bounded()) {
    layout.add_bounded(name, v.lower(), v.upper());
  } else {
    layout.add_real(name);
  }
  const Eigen::Index param = layout.block(name).offset;
  latents_.push_back(Latent{param, v});
  return Source{v.first, param};
}

void RecordTerm::realize(const std::vector<Source>& sources, const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  out.resize(static_cast<Eigen::Index>(sources.size()));
  for (std::size_t k = 0; k < sources.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = sources[k].param < 0 ? sources[k].value : x[sources[k].param];
  }
}

double RecordTerm::latent_log_prior(const Eigen::VectorXd& x) const {
  double lp = 0.0;
  for (const auto& latent : latents_) {
    const double g = x[latent.param];
    switch (latent.spec.kind) {
      case UncertainValue::Kind::normal:
        lp += log_normal_pdf(g, latent.spec.first, latent.spec.second);
        break;
      case UncertainValue::Kind::triangular:
        lp += log_symmetric_triangular(g, latent.spec.first, latent.spec.second);
        break;
      case UncertainValue::Kind::interval:
      case UncertainValue::Kind::point:
        break;
    }
  }
  return lp;
}

double RecordTerm::operator()(const Eigen::VectorXd& x, const Eigen::Ref<const Eigen::VectorXd>& w) const {
  double lp = latent_log_prior(x);
  if (!std::isfinite(lp)) return kNegInf;
  double gamma = 0.0;
  if (gamma_param_ >= 0) {
    gamma = x[gamma_param_];
    lp += scalar_log_density(ScalarDistribution::gamma(gamma_prior_.shape, gamma_prior_.rate), gamma);
    if (!std::isfinite(lp)) return kNegInf;
  }
  const Eigen::VectorXd weights = w;

  Eigen::VectorXd first;
  realize(first_, x, first);
  switch (payload_) {
    case Payload::pcm: {
      if (!(first.minCoeff() > 0.0)) return kNegInf;
      Eigen::MatrixXd pcm = Eigen::MatrixXd::Ones(size_, size_);
      Eigen::Index k = 0;
      for (Eigen::Index i = 0; i < size_; ++i) {
        for (Eigen::Index j = i + 1; j < size_; ++j, ++k) {
          pcm(i, j) = first[k];
          pcm(j, i) = 1.0 / first[k];
        }
      }
      return lp + likelihood::ahp(pcm, weights, gamma);
    }
    case Payload::bwm: {
      Eigen::VectorXd second;
      realize(second_, x, second);
      if (multinomial_) return lp + likelihood::bwm(first, second, weights);
      if (!(first.minCoeff() > 0.0) || !(second.minCoeff() > 0.0)) return kNegInf;
      return lp + likelihood::bwm_dirichlet(first, second, weights, gamma, strict_paper_bwm_);
    }
    case Payload::values:
      if (multinomial_) return lp + likelihood::value_vector(first, weights);
      if (!(first.minCoeff() > 0.0)) return kNegInf;
      return lp + likelihood::value_vector_dirichlet(first, weights, gamma);
  }
  return kNegInf;
}

void RecordTerm::initialize(Eigen::VectorXd& x) const {
  if (gamma_param_ >= 0) x[gamma_param_] = 1.0;
  for (const auto& latent : latents_) x[latent.param] = latent.spec.initial_value();
}

}  // namespace credal_mcdm::detail
