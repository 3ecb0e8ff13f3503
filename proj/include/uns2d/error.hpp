#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uns2d {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a numerical routine (grid mismatch, bad parameter).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem. `key_path` names the offending entry, e.g. "grid.nx".
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A run inside an experiment produced non-finite or runaway values.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace uns2d
