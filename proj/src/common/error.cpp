#include "ricb/error.hpp"

namespace ricb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnreadableDirectory: return "UnreadableDirectory";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ManifestDesync: return "ManifestDesync";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyBank: return "EmptyBank";
    case ErrorCode::PercentOutOfRange: return "PercentOutOfRange";
    case ErrorCode::EmptyQuerySet: return "EmptyQuerySet";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::BankLoadFailure: return "BankLoadFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace ricb
