#pragma once

#include <stdexcept>
#include <string>

namespace tgminer {

enum class ErrorCode {
  DuplicateTimestamp,
  DanglingEndpoint,
  SelfLoop,
  EmptyLabel,
  NotTConnected,
  InvalidExtension,
  ParseError,
  TieRejected,
  EmptyDataset,
  ConfigInvalid,
  SpecInvalid,
  BudgetExceeded,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::NotTConnected: return "NotTConnected";
    case ErrorCode::InvalidExtension: return "InvalidExtension";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TieRejected: return "TieRejected";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tgminer
