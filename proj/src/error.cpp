#include "ardlkit/error.hpp"

namespace ardlkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingObservation: return "MissingObservation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::LengthError: return "LengthError";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BandwidthTooLarge: return "BandwidthTooLarge";
    case ErrorCode::SingularRestrictionCovariance: return "SingularRestrictionCovariance";
    case ErrorCode::ExcessIntegration: return "ExcessIntegration";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::UnitRootDenominator: return "UnitRootDenominator";
    case ErrorCode::NoLaggedRegressors: return "NoLaggedRegressors";
    case ErrorCode::MissingCriticalValues: return "MissingCriticalValues";
    case ErrorCode::UnsupportedPValue: return "UnsupportedPValue";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
  }
  return "Unknown";
}

}  // namespace ardlkit
