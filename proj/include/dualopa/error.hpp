#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualopa {

enum class ErrorKind {
  CutoffViolation,
  ShapeMismatch,
  ZeroState,
  NotNormalized,
  DomainError,
  ResourceLimit,
  TruncationError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying one of the library's error categories. The message is
/// prefixed with the category name, e.g. "CutoffViolation: count 7 > 6".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dualopa
