#pragma once

#include <stdexcept>
#include <string>

namespace starcert {

enum class ErrorCode {
  InvalidArgument,
  MissingFile,
  MalformedJson,
  SizeMismatch,
  UnsupportedVersion,
  InvalidManifest,
  InvalidSample,
  DimensionMismatch,
  EmptyOperands,
  EmptyCluster,
  CenterMismatch,
  OutsidePolygon,
  OutOfBounds,
  UndefinedCorrelation,
  NoData,
  SceneTooCrowded,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit path) can tell input problems apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace starcert
