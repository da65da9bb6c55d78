#pragma once
#include <stdexcept>
#include <string>

namespace sqcorr {

/// Invalid configuration or parameter value. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem / I/O failure. CLI maps this to exit code 3.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed on-disk data (bad magic, wrong length, unparseable field).
/// CLI maps this to exit code 4.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sqcorr
