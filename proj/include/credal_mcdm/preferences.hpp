#pragma once

// Elicited preferences of a single decision-maker.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace credal_mcdm {

/// One elicited judgement on the elicitation scale (e.g. 1-9), either a
/// point value or a distribution over the value the DM had in mind.
struct UncertainValue {
  enum class Kind { point, normal, interval, triangular };

  Kind kind = Kind::point;
  double first = 1.0;   // point value, normal mean, interval/triangular lower end
  double second = 0.0;  // normal sd, interval/triangular upper end
  // Optional truncation of a normal judgement; both or neither.
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;

  static UncertainValue point(double value) { return {Kind::point, value, 0.0, {}, {}}; }
  static UncertainValue normal(double mean, double sd) { return {Kind::normal, mean, sd, {}, {}}; }
  static UncertainValue truncated_normal(double mean, double sd, double lower, double upper) {
    return {Kind::normal, mean, sd, lower, upper};
  }
  static UncertainValue interval(double lower, double upper) { return {Kind::interval, lower, upper, {}, {}}; }
  static UncertainValue triangular(double lower, double upper) {
    return {Kind::triangular, lower, upper, {}, {}};
  }

  bool is_point() const noexcept { return kind == Kind::point; }
  bool is_bounded() const noexcept {
    return kind == Kind::interval || kind == Kind::triangular || (lower_bound && upper_bound);
  }
  /// Starting value for the latent: the point, the normal mean, or the
  /// interval midpoint.
  double initial_value() const noexcept;
  /// Support of a bounded latent.
  double lower() const noexcept;
  double upper() const noexcept;
};

/// Full pairwise comparison matrix (AHP). Entry (i, j) is the stated
/// importance of criterion i over j. Uncertain judgements live in the upper
/// triangle; the mirrored lower entry is ignored and replaced by the
/// reciprocal of the latent value.
struct PairwiseMatrix {
  Eigen::Index size = 0;
  std::vector<UncertainValue> entries;  // row-major, size * size

  const UncertainValue& at(Eigen::Index i, Eigen::Index j) const {
    return entries[static_cast<std::size_t>(i * size + j)];
  }
  UncertainValue& at(Eigen::Index i, Eigen::Index j) { return entries[static_cast<std::size_t>(i * size + j)]; }

  static PairwiseMatrix from_points(const Eigen::MatrixXd& pcm);
};

/// Best-worst method vectors.
struct BestWorst {
  Eigen::Index best = 0;
  Eigen::Index worst = 0;
  std::vector<UncertainValue> best_to_others;
  std::vector<UncertainValue> others_to_worst;
};

enum class ValueMethod { point_allocation, smart, swing };

/// Point allocation, SMART, or swing ratings.
struct ValueVector {
  ValueMethod method = ValueMethod::point_allocation;
  std::vector<UncertainValue> values;
};

struct PreferenceRecord {
  std::string dm_id;
  std::variant<PairwiseMatrix, BestWorst, ValueVector> payload;

  static PreferenceRecord ahp(std::string id, const Eigen::MatrixXd& pcm);
  static PreferenceRecord bwm(std::string id, Eigen::Index best, Eigen::Index worst,
                              const Eigen::VectorXd& best_to_others, const Eigen::VectorXd& others_to_worst);
  static PreferenceRecord value_vector(std::string id, const Eigen::VectorXd& values,
                                       ValueMethod method = ValueMethod::point_allocation);

  Eigen::Index criteria_count() const;
  bool has_uncertainty() const;
};

/// Throws Error(InvalidRecord | NonReciprocal | NonPositivePcmEntry | ...)
/// naming the offending DM when the record breaks a payload invariant.
void validate(const PreferenceRecord& record);

std::string_view to_string(ValueMethod method) noexcept;

}  // namespace credal_mcdm
