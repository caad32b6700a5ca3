#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsopc {

/// A model or channel parameter outside its valid domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root finding for a requested scintillation index failed to bracket a solution.
class UnattainableError : public ParameterError {
 public:
  UnattainableError(const std::string& what, double lo, double hi)
      : ParameterError(what), lo_(lo), hi_(hi) {}
  double interval_lo() const noexcept { return lo_; }
  double interval_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Configuration diagnostic. `line() == 0` means the value came from the command line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& message)
      : std::runtime_error(format(key, line, message)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, std::size_t line, const std::string& message) {
    std::string where = line == 0 ? std::string("command line") : "line " + std::to_string(line);
    return where + ": key '" + key + "': " + message;
  }

  std::string key_;
  std::size_t line_;
};

}  // namespace fsopc
