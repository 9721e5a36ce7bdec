#pragma once

// Parameter layouts and the bijections between constrained parameter values
// and the unconstrained space the sampler moves in.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace credal_mcdm {

enum class ConstraintKind { simplex, positive, real, bounded };

std::string_view to_string(ConstraintKind kind) noexcept;

struct ParameterBlock {
  std::string name;
  ConstraintKind kind = ConstraintKind::real;
  Eigen::Index size = 1;         // constrained length
  double lower = 0.0;            // bounded only
  double upper = 0.0;            // bounded only
  bool scalar = true;            // single column reported under `name`
  Eigen::Index offset = 0;       // into the constrained vector
  Eigen::Index free_offset = 0;  // into the unconstrained vector

  /// Simplex blocks lose one degree of freedom to the unit-sum constraint.
  Eigen::Index free_size() const noexcept {
    return kind == ConstraintKind::simplex ? size - 1 : size;
  }
};

/// Result of mapping an unconstrained point back to parameter space.
struct ConstrainedPoint {
  Eigen::VectorXd values;
  double log_jacobian = 0.0;
};

/// Ordered list of named parameter blocks. Blocks tile both the constrained
/// and the unconstrained vectors contiguously in insertion order.
///
/// Simplex blocks use the additive log-ratio map with the last part as
/// reference, positive blocks use log, bounded blocks a scaled logistic map.
class ParameterLayout {
 public:
  ParameterLayout& add_simplex(std::string name, Eigen::Index size);
  ParameterLayout& add_positive(std::string name);
  ParameterLayout& add_real(std::string name);
  ParameterLayout& add_real_vector(std::string name, Eigen::Index size);
  ParameterLayout& add_bounded(std::string name, double lower, double upper);

  const std::vector<ParameterBlock>& blocks() const noexcept { return blocks_; }
  const ParameterBlock& block(std::string_view name) const;
  bool contains(std::string_view name) const noexcept;

  Eigen::Index constrained_size() const noexcept { return constrained_size_; }
  Eigen::Index unconstrained_size() const noexcept { return unconstrained_size_; }

  /// One name per constrained coordinate, e.g. "w_star[2]" or "gamma_star".
  std::vector<std::string> column_names() const;

  Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& constrained) const;
  ConstrainedPoint from_unconstrained(const Eigen::VectorXd& unconstrained) const;

  /// Allocation-free variant for the sampler's inner loop; returns the
  /// log absolute Jacobian determinant.
  double from_unconstrained(const Eigen::VectorXd& unconstrained, Eigen::VectorXd& constrained) const;

 private:
  ParameterLayout& push(ParameterBlock block);

  std::vector<ParameterBlock> blocks_;
  Eigen::Index constrained_size_ = 0;
  Eigen::Index unconstrained_size_ = 0;
};

}  // namespace credal_mcdm
