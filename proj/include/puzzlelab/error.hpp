#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace puzzlelab {

enum class ErrorCode {
  EmptyInput,
  DuplicateCell,
  Disconnected,
  CapExceeded,
  IllegalCut,
  WrongModel,
  InvalidN,
  OffBoardStart,
  UnsupportedOrder,
  NoUniqueSolution,
  Indeterminate,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Domain failure raised by every lab. Callers branch on code(); what() carries detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace puzzlelab
