#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrk {

enum class ErrorCode {
  InvalidArgument,
  // measures
  IndexOutOfRange,
  MassExceedsOne,
  NegativeMass,
  SpaceMismatch,
  // hierarchy
  InvalidEpsilon,
  BranchingTooSmall,
  StrictRefinementViolated,
  LeafEpsilonNonzero,
  UnevenLeafDepth,
  NonTopologicalOrder,
  MalformedTree,
  EnumerationTooLarge,
  NotAPartition,
  // hier_measure / multires
  LeafCountMismatch,
  UnknownNode,
  TreeMismatch,
  // imaging
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedPixelData,
  TreeShapeMismatch,
  // gram / io
  EmptyDataset,
  IoFailure,
  CorruptFile,
  // svm
  SingleClassInput,
  NoConvergence,
  LengthMismatch,
  TooFewRecords,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception; the code is the
// machine-readable part, what() carries the human context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mrk
