#pragma once

// Compositional data on the unit simplex and the centered log-ratio map.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Tolerance on the unit-sum invariant of compositions and the zero-sum
/// invariant of CLR vectors.
inline constexpr double kSimplexTolerance = 1e-9;

/// Tolerance used by round-trip checks of every transform.
inline constexpr double kRoundTripTolerance = 1e-10;

/// A positive vector summing to one. Construct through closure() or
/// BasicComposition::from_values(), both of which enforce the invariants.
template <typename Scalar>
class BasicComposition {
 public:
  static BasicComposition from_values(VectorX<Scalar> values) {
    if (values.size() < 2) {
      throw Error(ErrorCode::DimensionTooSmall, "a composition needs at least two parts");
    }
    for (Eigen::Index j = 0; j < values.size(); ++j) {
      if (!(values[j] > Scalar(0))) {
        throw Error(ErrorCode::NonPositiveEntry,
                    "composition entry " + std::to_string(j) + " is not positive");
      }
    }
    using std::abs;
    if (abs(values.sum() - Scalar(1)) > Scalar(kSimplexTolerance)) {
      throw Error(ErrorCode::InvalidParameter, "composition does not sum to one");
    }
    return BasicComposition(std::move(values));
  }

  const VectorX<Scalar>& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Scalar operator[](Eigen::Index j) const { return values_[j]; }

 private:
  explicit BasicComposition(VectorX<Scalar> values) : values_(std::move(values)) {}

  VectorX<Scalar> values_;
};

using Composition = BasicComposition<double>;

/// Centered log-ratio coordinates of a composition.
template <typename Scalar>
class BasicClrVector {
 public:
  BasicClrVector() = default;
  explicit BasicClrVector(VectorX<Scalar> values) : values_(std::move(values)) {}

  const VectorX<Scalar>& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Scalar operator[](Eigen::Index j) const { return values_[j]; }

 private:
  VectorX<Scalar> values_;
};

using ClrVector = BasicClrVector<double>;

/// raw / sum(raw). Requires at least two strictly positive entries.
template <typename Derived>
BasicComposition<typename Derived::Scalar> closure(const Eigen::MatrixBase<Derived>& raw) {
  using Scalar = typename Derived::Scalar;
  if (raw.size() < 2) {
    throw Error(ErrorCode::DimensionTooSmall, "closure needs at least two parts");
  }
  for (Eigen::Index j = 0; j < raw.size(); ++j) {
    if (!(raw(j) > Scalar(0))) {
      throw Error(ErrorCode::NonPositiveEntry,
                  "closure input entry " + std::to_string(j) + " is not positive");
    }
  }
  VectorX<Scalar> values = raw / raw.sum();
  return BasicComposition<Scalar>::from_values(std::move(values));
}

template <typename Scalar>
BasicComposition<Scalar> closure(const BasicComposition<Scalar>& w) {
  return closure(w.values());
}

template <typename Derived>
VectorX<typename Derived::Scalar> clr_values(const Eigen::MatrixBase<Derived>& w) {
  auto logs = w.array().log().matrix().eval();
  return (logs.array() - logs.mean()).matrix();
}

/// clr(w)_j = log(w_j / geometric_mean(w)).
template <typename Scalar>
BasicClrVector<Scalar> clr(const BasicComposition<Scalar>& w) {
  return BasicClrVector<Scalar>(clr_values(w.values()));
}

/// Inverse of clr. Inputs that do not sum to zero are centered first, so a
/// constant vector maps to the uniform composition.
template <typename Derived>
BasicComposition<typename Derived::Scalar> clr_inverse(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    using std::isfinite;
    if (!isfinite(v(j))) {
      throw Error(ErrorCode::Overflow, "clr_inverse input is not finite");
    }
  }
  VectorX<Scalar> e = (v.array() - v.mean()).exp().matrix();
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    using std::isfinite;
    if (!isfinite(e[j])) {
      throw Error(ErrorCode::Overflow, "exp overflow in clr_inverse");
    }
  }
  if (!(e.minCoeff() > Scalar(0))) {
    throw Error(ErrorCode::Overflow, "exp underflow in clr_inverse");
  }
  return closure(e);
}

template <typename Scalar>
BasicComposition<Scalar> clr_inverse(const BasicClrVector<Scalar>& v) {
  return clr_inverse(v.values());
}

}  // namespace credal_mcdm
