#include "mrk/error.hpp"

namespace mrk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MassExceedsOne: return "MassExceedsOne";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::BranchingTooSmall: return "BranchingTooSmall";
    case ErrorCode::StrictRefinementViolated: return "StrictRefinementViolated";
    case ErrorCode::LeafEpsilonNonzero: return "LeafEpsilonNonzero";
    case ErrorCode::UnevenLeafDepth: return "UnevenLeafDepth";
    case ErrorCode::NonTopologicalOrder: return "NonTopologicalOrder";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::LeafCountMismatch: return "LeafCountMismatch";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::TreeMismatch: return "TreeMismatch";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::TruncatedPixelData: return "TruncatedPixelData";
    case ErrorCode::TreeShapeMismatch: return "TreeShapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace mrk
