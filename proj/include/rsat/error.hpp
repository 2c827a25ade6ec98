#pragma once

#include <stdexcept>
#include <string>

namespace rsat {

enum class ErrorCode {
  InvalidConfig,
  MissingAssignment,
  EmptyDomain,
  ProfileMismatch,
  WrongVspec,
  DuplicateThresholds,
  ResourceLimit,
  WrongArity,
  IndexOutOfRange,
  OddLength,
  DomainError,
  NoCrossing,
  ParseError,
};

inline const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::MissingAssignment: return "MissingAssignment";
  case ErrorCode::EmptyDomain: return "EmptyDomain";
  case ErrorCode::ProfileMismatch: return "ProfileMismatch";
  case ErrorCode::WrongVspec: return "WrongVspec";
  case ErrorCode::DuplicateThresholds: return "DuplicateThresholds";
  case ErrorCode::ResourceLimit: return "ResourceLimit";
  case ErrorCode::WrongArity: return "WrongArity";
  case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorCode::OddLength: return "OddLength";
  case ErrorCode::DomainError: return "DomainError";
  case ErrorCode::NoCrossing: return "NoCrossing";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace rsat
