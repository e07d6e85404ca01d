#include "dualopa/error.hpp"

namespace dualopa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CutoffViolation: return "CutoffViolation";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::TruncationError: return "TruncationError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace dualopa
