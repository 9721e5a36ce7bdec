#pragma once

// Likelihood of one decision-maker's preferences given its weight block,
// including the concentration prior and the latent layer of uncertain
// judgements. Shared by the group and mixture models.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/group_model.hpp"
#include "credal_mcdm/preferences.hpp"
#include "credal_mcdm/transforms.hpp"

namespace credal_mcdm::detail {

/// Crude closed-form weights from the judgements' central values: row
/// geometric means for a PCM, the geometric mean of closure(A_W) and
/// closure(1/A_B) for BWM, the closure of the ratings otherwise.
Eigen::VectorXd rough_weights(const PreferenceRecord& record);

class RecordTerm {
 public:
  /// Registers gamma[r] and latent blocks in `layout`. `index` is 1-based.
  RecordTerm(const PreferenceRecord& record, int index, ParameterLayout& layout, GammaPrior gamma_prior,
             bool strict_paper_bwm, std::vector<std::string>& warnings);

  double operator()(const Eigen::VectorXd& x, const Eigen::Ref<const Eigen::VectorXd>& w) const;

  void initialize(Eigen::VectorXd& x) const;

 private:
  enum class Payload { pcm, bwm, values };

  // A judgement is either fixed or read from the constrained vector.
  struct Source {
    double value = 1.0;
    Eigen::Index param = -1;
  };

  struct Latent {
    Eigen::Index param;
    UncertainValue spec;
  };

  Source register_value(const UncertainValue& v, const std::string& name, ParameterLayout& layout);
  void realize(const std::vector<Source>& sources, const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  double latent_log_prior(const Eigen::VectorXd& x) const;

  Payload payload_;
  Eigen::Index size_ = 0;
  bool multinomial_ = false;
  bool strict_paper_bwm_ = false;
  GammaPrior gamma_prior_;
  Eigen::Index gamma_param_ = -1;
  std::vector<Source> first_;   // pcm upper triangle (row-major), best-to-others, or values
  std::vector<Source> second_;  // others-to-worst
  std::vector<Latent> latents_;
};

}  // namespace credal_mcdm::detail
