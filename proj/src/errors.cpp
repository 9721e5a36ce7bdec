#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AllZeroCounts: return "AllZeroCounts";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::NonReciprocal: return "NonReciprocal";
    case ErrorCode::NonPositivePcmEntry: return "NonPositivePcmEntry";
    case ErrorCode::MixedCriteriaCount: return "MixedCriteriaCount";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::TooManyClusters: return "TooManyClusters";
    case ErrorCode::ClusterCountTooLarge: return "ClusterCountTooLarge";
    case ErrorCode::NonFiniteStart: return "NonFiniteStart";
    case ErrorCode::AllProposalsRejected: return "AllProposalsRejected";
    case ErrorCode::SingleChain: return "SingleChain";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace credal_mcdm
