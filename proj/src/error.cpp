#include "usc/error.hpp"

namespace usc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidTruncation: return "invalid truncation";
    case ErrorCode::Shape: return "shape mismatch";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::OutOfModelRange: return "out of model range";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::NotBracketed: return "not bracketed";
    case ErrorCode::Precondition: return "precondition violated";
    case ErrorCode::Index: return "index error";
    case ErrorCode::DegenerateKernel: return "degenerate kernel";
    case ErrorCode::NonStationary: return "non-stationary";
    case ErrorCode::InsufficientCutoff: return "insufficient cutoff";
    case ErrorCode::UndefinedRatio: return "undefined ratio";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::Usage: return "usage error";
  }
  return "error";
}

}  // namespace usc
