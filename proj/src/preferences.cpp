#include "credal_mcdm/preferences.hpp"

#include <cmath>

#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

namespace {

std::vector<UncertainValue> to_points(const Eigen::VectorXd& v) {
  std::vector<UncertainValue> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(UncertainValue::point(v[j]));
  return out;
}

void check_value(const UncertainValue& v, const std::string& where) {
  switch (v.kind) {
    case UncertainValue::Kind::point:
      if (!(v.first > 0.0) || !std::isfinite(v.first)) {
        throw Error(ErrorCode::InvalidRecord, where + ": value must be positive and finite");
      }
      break;
    case UncertainValue::Kind::normal:
      if (!(v.first > 0.0)) throw Error(ErrorCode::InvalidRecord, where + ": normal mean must be positive");
      if (!(v.second > 0.0)) throw Error(ErrorCode::InvalidRecord, where + ": normal sd must be positive");
      if (v.lower_bound.has_value() != v.upper_bound.has_value()) {
        throw Error(ErrorCode::InvalidRecord, where + ": truncation needs both bounds");
      }
      if (v.lower_bound && !(*v.lower_bound < *v.upper_bound)) {
        throw Error(ErrorCode::InvalidInterval, where + ": truncation bounds need lower < upper");
      }
      break;
    case UncertainValue::Kind::interval:
    case UncertainValue::Kind::triangular:
      if (!(v.first < v.second)) throw Error(ErrorCode::InvalidInterval, where + ": needs lower < upper");
      if (v.first < 0.0) throw Error(ErrorCode::InvalidRecord, where + ": interval must be non-negative");
      break;
  }
}

bool is_point_one(const UncertainValue& v) { return v.is_point() && std::abs(v.first - 1.0) <= 1e-12; }

}  // namespace

double UncertainValue::initial_value() const noexcept {
  switch (kind) {
    case Kind::point: return first;
    case Kind::normal:
      if (lower_bound && upper_bound && (first <= *lower_bound || first >= *upper_bound)) {
        return 0.5 * (*lower_bound + *upper_bound);
      }
      return first;
    case Kind::interval:
    case Kind::triangular: return 0.5 * (first + second);
  }
  return first;
}

double UncertainValue::lower() const noexcept {
  if (kind == Kind::interval || kind == Kind::triangular) return first;
  return lower_bound.value_or(-INFINITY);
}

double UncertainValue::upper() const noexcept {
  if (kind == Kind::interval || kind == Kind::triangular) return second;
  return upper_bound.value_or(INFINITY);
}

PairwiseMatrix PairwiseMatrix::from_points(const Eigen::MatrixXd& pcm) {
  PairwiseMatrix m;
  m.size = pcm.rows();
  m.entries.reserve(static_cast<std::size_t>(pcm.size()));
  for (Eigen::Index i = 0; i < pcm.rows(); ++i) {
    for (Eigen::Index j = 0; j < pcm.cols(); ++j) m.entries.push_back(UncertainValue::point(pcm(i, j)));
  }
  return m;
}

PreferenceRecord PreferenceRecord::ahp(std::string id, const Eigen::MatrixXd& pcm) {
  if (pcm.rows() != pcm.cols()) {
    throw Error(ErrorCode::InvalidRecord, "DM '" + id + "': pairwise comparison matrix is not square");
  }
  return PreferenceRecord{std::move(id), PairwiseMatrix::from_points(pcm)};
}

PreferenceRecord PreferenceRecord::bwm(std::string id, Eigen::Index best, Eigen::Index worst,
                                       const Eigen::VectorXd& best_to_others,
                                       const Eigen::VectorXd& others_to_worst) {
  return PreferenceRecord{std::move(id), BestWorst{best, worst, to_points(best_to_others), to_points(others_to_worst)}};
}

PreferenceRecord PreferenceRecord::value_vector(std::string id, const Eigen::VectorXd& values, ValueMethod method) {
  return PreferenceRecord{std::move(id), ValueVector{method, to_points(values)}};
}

Eigen::Index PreferenceRecord::criteria_count() const {
  struct Visitor {
    Eigen::Index operator()(const PairwiseMatrix& m) const { return m.size; }
    Eigen::Index operator()(const BestWorst& b) const { return static_cast<Eigen::Index>(b.best_to_others.size()); }
    Eigen::Index operator()(const ValueVector& v) const { return static_cast<Eigen::Index>(v.values.size()); }
  };
  return std::visit(Visitor{}, payload);
}

bool PreferenceRecord::has_uncertainty() const {
  auto any_uncertain = [](const std::vector<UncertainValue>& values) {
    for (const auto& v : values) {
      if (!v.is_point()) return true;
    }
    return false;
  };
  struct Visitor {
    decltype(any_uncertain)& f;
    bool operator()(const PairwiseMatrix& m) const { return f(m.entries); }
    bool operator()(const BestWorst& b) const { return f(b.best_to_others) || f(b.others_to_worst); }
    bool operator()(const ValueVector& v) const { return f(v.values); }
  };
  return std::visit(Visitor{any_uncertain}, payload);
}

void validate(const PreferenceRecord& record) {
  const std::string who = "DM '" + record.dm_id + "'";
  const Eigen::Index n = record.criteria_count();
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, who + ": at least two criteria are required");

  if (const auto* m = std::get_if<PairwiseMatrix>(&record.payload)) {
    if (static_cast<Eigen::Index>(m->entries.size()) != n * n) {
      throw Error(ErrorCode::InvalidRecord, who + ": pairwise comparison matrix is not square");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!is_point_one(m->at(i, i))) {
        throw Error(ErrorCode::InvalidRecord, who + ": diagonal entry " + std::to_string(i + 1) + " must be 1");
      }
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const auto& upper = m->at(i, j);
        const auto& lower = m->at(j, i);
        const std::string where = who + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        if (!lower.is_point()) {
          throw Error(ErrorCode::InvalidRecord, where + ": uncertain judgements belong in the upper triangle");
        }
        if ((upper.is_point() && !(upper.first > 0.0)) || !(lower.first > 0.0)) {
          throw Error(ErrorCode::NonPositivePcmEntry, where + ": comparisons must be positive");
        }
        check_value(upper, where);
        if (upper.is_point() && std::abs(lower.first - 1.0 / upper.first) > 1e-6) {
          throw Error(ErrorCode::NonReciprocal, where + ": lower triangle is not the reciprocal of the upper");
        }
      }
    }
    return;
  }

  if (const auto* b = std::get_if<BestWorst>(&record.payload)) {
    if (b->others_to_worst.size() != b->best_to_others.size()) {
      throw Error(ErrorCode::InvalidRecord, who + ": best-to-others and others-to-worst lengths differ");
    }
    if (b->best < 0 || b->best >= n || b->worst < 0 || b->worst >= n) {
      throw Error(ErrorCode::IndexOutOfRange, who + ": best or worst index out of range");
    }
    if (b->best == b->worst) throw Error(ErrorCode::InvalidRecord, who + ": best and worst coincide");
    if (!is_point_one(b->best_to_others[static_cast<std::size_t>(b->best)])) {
      throw Error(ErrorCode::InvalidRecord, who + ": best-to-others entry of the best criterion must be 1");
    }
    if (!is_point_one(b->others_to_worst[static_cast<std::size_t>(b->worst)])) {
      throw Error(ErrorCode::InvalidRecord, who + ": others-to-worst entry of the worst criterion must be 1");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      check_value(b->best_to_others[static_cast<std::size_t>(j)], who + " best-to-others " + std::to_string(j + 1));
      check_value(b->others_to_worst[static_cast<std::size_t>(j)], who + " others-to-worst " + std::to_string(j + 1));
    }
    return;
  }

  const auto& v = std::get<ValueVector>(record.payload);
  for (Eigen::Index j = 0; j < n; ++j) check_value(v.values[static_cast<std::size_t>(j)], who + " value " + std::to_string(j + 1));
}

std::string_view to_string(ValueMethod method) noexcept {
  switch (method) {
    case ValueMethod::point_allocation: return "pointAllocation";
    case ValueMethod::smart: return "smart";
    case ValueMethod::swing: return "swing";
  }
  return "unknown";
}

}  // namespace credal_mcdm
