#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace midas {

enum class ErrorKind {
  kInvalidInput,
  kAmbiguousLabel,
  kMissingFile,
  kMalformedRecord,
  kVoteLabelMismatch,
  kDimensionMismatch,
  kShapeMismatch,
  kEmptyDataset,
  kDegenerateCase,
  kDivergence,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit path) can tell a bad manifest from a numerical blow-up.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace midas
