#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vocra {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateTriad,
  kRankDeficient,
  kSingularInput,
  kInsufficientCorrespondences,
  kEmptyInput,
  kNoConsensus,
  kDegenerateCandidate,
  kEmptyInlierSet,
  kParseError,
  kIoError,
};

// Stable machine-readable name, e.g. "NoConsensus".
std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vocra
