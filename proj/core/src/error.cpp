#include "midas/error.hpp"

namespace midas {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kAmbiguousLabel: return "ambiguous-label";
    case ErrorKind::kMissingFile: return "missing-file";
    case ErrorKind::kMalformedRecord: return "malformed-record";
    case ErrorKind::kVoteLabelMismatch: return "vote-label-mismatch";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kShapeMismatch: return "shape-mismatch";
    case ErrorKind::kEmptyDataset: return "empty-dataset";
    case ErrorKind::kDegenerateCase: return "degenerate-case";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace midas
