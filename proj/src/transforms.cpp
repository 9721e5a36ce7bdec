#include "credal_mcdm/transforms.hpp"

#include <cmath>
#include <limits>

#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

std::string_view to_string(ConstraintKind kind) noexcept {
  switch (kind) {
    case ConstraintKind::simplex: return "simplex";
    case ConstraintKind::positive: return "positive";
    case ConstraintKind::real: return "real";
    case ConstraintKind::bounded: return "bounded";
  }
  return "unknown";
}

ParameterLayout& ParameterLayout::push(ParameterBlock block) {
  if (contains(block.name)) {
    throw Error(ErrorCode::LayoutMismatch, "duplicate parameter block '" + block.name + "'");
  }
  block.offset = constrained_size_;
  block.free_offset = unconstrained_size_;
  constrained_size_ += block.size;
  unconstrained_size_ += block.free_size();
  blocks_.push_back(std::move(block));
  return *this;
}

ParameterLayout& ParameterLayout::add_simplex(std::string name, Eigen::Index size) {
  if (size < 1) {
    throw Error(ErrorCode::DimensionTooSmall, "simplex block '" + name + "' is empty");
  }
  ParameterBlock b;
  b.name = std::move(name);
  b.kind = ConstraintKind::simplex;
  b.size = size;
  b.scalar = false;
  return push(std::move(b));
}

ParameterLayout& ParameterLayout::add_positive(std::string name) {
  ParameterBlock b;
  b.name = std::move(name);
  b.kind = ConstraintKind::positive;
  return push(std::move(b));
}

ParameterLayout& ParameterLayout::add_real(std::string name) {
  ParameterBlock b;
  b.name = std::move(name);
  b.kind = ConstraintKind::real;
  return push(std::move(b));
}

ParameterLayout& ParameterLayout::add_real_vector(std::string name, Eigen::Index size) {
  ParameterBlock b;
  b.name = std::move(name);
  b.kind = ConstraintKind::real;
  b.size = size;
  b.scalar = false;
  return push(std::move(b));
}

ParameterLayout& ParameterLayout::add_bounded(std::string name, double lower, double upper) {
  if (!(lower < upper)) {
    throw Error(ErrorCode::InvalidInterval, "bounded block '" + name + "' needs lower < upper");
  }
  ParameterBlock b;
  b.name = std::move(name);
  b.kind = ConstraintKind::bounded;
  b.lower = lower;
  b.upper = upper;
  return push(std::move(b));
}

const ParameterBlock& ParameterLayout::block(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw Error(ErrorCode::LayoutMismatch, "no parameter block named '" + std::string(name) + "'");
}

bool ParameterLayout::contains(std::string_view name) const noexcept {
  for (const auto& b : blocks_) {
    if (b.name == name) return true;
  }
  return false;
}

std::vector<std::string> ParameterLayout::column_names() const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(constrained_size_));
  for (const auto& b : blocks_) {
    if (b.scalar) {
      names.push_back(b.name);
      continue;
    }
    for (Eigen::Index k = 0; k < b.size; ++k) {
      names.push_back(b.name + "[" + std::to_string(k + 1) + "]");
    }
  }
  return names;
}

Eigen::VectorXd ParameterLayout::to_unconstrained(const Eigen::VectorXd& constrained) const {
  if (constrained.size() != constrained_size_) {
    throw Error(ErrorCode::LayoutMismatch, "constrained vector has " + std::to_string(constrained.size()) +
                                               " entries, layout expects " + std::to_string(constrained_size_));
  }
  Eigen::VectorXd u(unconstrained_size_);
  for (const auto& b : blocks_) {
    auto x = constrained.segment(b.offset, b.size);
    switch (b.kind) {
      case ConstraintKind::simplex: {
        if (!(x.minCoeff() > 0.0) || std::abs(x.sum() - 1.0) > 1e-9) {
          throw Error(ErrorCode::InvalidParameter, "block '" + b.name + "' is not a composition");
        }
        const double log_ref = std::log(x[b.size - 1]);
        for (Eigen::Index k = 0; k + 1 < b.size; ++k) {
          u[b.free_offset + k] = std::log(x[k]) - log_ref;
        }
        break;
      }
      case ConstraintKind::positive:
        if (!(x.minCoeff() > 0.0)) {
          throw Error(ErrorCode::InvalidParameter, "block '" + b.name + "' is not positive");
        }
        u.segment(b.free_offset, b.size) = x.array().log().matrix();
        break;
      case ConstraintKind::real:
        u.segment(b.free_offset, b.size) = x;
        break;
      case ConstraintKind::bounded:
        for (Eigen::Index k = 0; k < b.size; ++k) {
          const double t = (x[k] - b.lower) / (b.upper - b.lower);
          if (!(t > 0.0 && t < 1.0)) {
            throw Error(ErrorCode::InvalidParameter, "block '" + b.name + "' is outside its bounds");
          }
          u[b.free_offset + k] = std::log(t) - std::log1p(-t);
        }
        break;
    }
  }
  return u;
}

ConstrainedPoint ParameterLayout::from_unconstrained(const Eigen::VectorXd& unconstrained) const {
  ConstrainedPoint out;
  out.log_jacobian = from_unconstrained(unconstrained, out.values);
  return out;
}

double ParameterLayout::from_unconstrained(const Eigen::VectorXd& u, Eigen::VectorXd& x) const {
  if (u.size() != unconstrained_size_) {
    throw Error(ErrorCode::LayoutMismatch, "unconstrained vector has " + std::to_string(u.size()) +
                                               " entries, layout expects " + std::to_string(unconstrained_size_));
  }
  x.resize(constrained_size_);
  double log_jac = 0.0;
  for (const auto& b : blocks_) {
    switch (b.kind) {
      case ConstraintKind::simplex: {
        // softmax of (u, 0); |det J| of the map to the first size-1 parts is
        // the product of all parts.
        double max_u = 0.0;
        for (Eigen::Index k = 0; k + 1 < b.size; ++k) max_u = std::max(max_u, u[b.free_offset + k]);
        double denom = std::exp(-max_u);
        for (Eigen::Index k = 0; k + 1 < b.size; ++k) denom += std::exp(u[b.free_offset + k] - max_u);
        const double log_denom = max_u + std::log(denom);
        for (Eigen::Index k = 0; k < b.size; ++k) {
          const double log_x = (k + 1 < b.size ? u[b.free_offset + k] : 0.0) - log_denom;
          x[b.offset + k] = std::exp(log_x);
          log_jac += log_x;
        }
        break;
      }
      case ConstraintKind::positive:
        for (Eigen::Index k = 0; k < b.size; ++k) {
          const double v = u[b.free_offset + k];
          x[b.offset + k] = std::exp(v);
          log_jac += v;
        }
        break;
      case ConstraintKind::real:
        x.segment(b.offset, b.size) = u.segment(b.free_offset, b.size);
        break;
      case ConstraintKind::bounded: {
        const double width = b.upper - b.lower;
        for (Eigen::Index k = 0; k < b.size; ++k) {
          const double v = u[b.free_offset + k];
          // log sigmoid(v) and log(1 - sigmoid(v)) in overflow-safe form
          const double log_s = -std::log1p(std::exp(-std::abs(v))) + std::min(v, 0.0);
          const double log_1ms = log_s - v;
          x[b.offset + k] = b.lower + width * std::exp(log_s);
          log_jac += std::log(width) + log_s + log_1ms;
        }
        break;
      }
    }
  }
  return log_jac;
}

}  // namespace credal_mcdm
