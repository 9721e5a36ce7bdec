#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace credal_mcdm {

enum class ErrorCode {
  NonPositiveEntry,
  DimensionTooSmall,
  Overflow,
  LayoutMismatch,
  DimensionMismatch,
  AllZeroCounts,
  NotPositiveDefinite,
  InvalidParameter,
  InvalidInterval,
  InvalidRecord,
  NonReciprocal,
  NonPositivePcmEntry,
  MixedCriteriaCount,
  EmptyInput,
  TooFewRows,
  TooManyClusters,
  ClusterCountTooLarge,
  NonFiniteStart,
  AllProposalsRejected,
  SingleChain,
  IndexOutOfRange,
  InconsistentInput,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every module. The code identifies the failure
/// class; the message carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace credal_mcdm
