#include "puzzlelab/error.hpp"

namespace puzzlelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::IllegalCut: return "IllegalCut";
    case ErrorCode::WrongModel: return "WrongModel";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::OffBoardStart: return "OffBoardStart";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NoUniqueSolution: return "NoUniqueSolution";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace puzzlelab
