#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ardlkit {

enum class ErrorCode {
  InvalidArgument,
  MissingObservation,
  ParseError,
  DuplicateDate,
  DomainError,
  LengthError,
  ZeroVariance,
  RankDeficient,
  InsufficientData,
  BandwidthTooLarge,
  SingularRestrictionCovariance,
  ExcessIntegration,
  SingularSystem,
  UnitRootDenominator,
  NoLaggedRegressors,
  MissingCriticalValues,
  UnsupportedPValue,
  UnsupportedFamily,
  DegenerateCovariance,
  ConfigError,
  NetworkError,
  SchemaError,
  MissingArtifact,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// message names the offending row, column, date or regressor set.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ardlkit
