#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ricb {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  NonFinite,
  MissingGroundTruth,
  ConfigInvalid,
  EmptyDataset,
  UnreadableDirectory,
  BadMagic,
  VersionMismatch,
  DimMismatch,
  ManifestDesync,
  SampleTooLarge,
  ZeroVector,
  EmptyBank,
  PercentOutOfRange,
  EmptyQuerySet,
  IoError,
  InvalidArgument,
  BindFailure,
  BankLoadFailure,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as ricb::Error; what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ricb
