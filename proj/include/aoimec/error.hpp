#pragma once

#include <stdexcept>
#include <string>

namespace aoimec {

enum class ErrorKind {
  kInvalidArgument,
  kDomain,
  kInstability,
  kSingularity,
  kInfeasible,
  kConfig,
  kInsufficientSamples,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& w)
      : Error(ErrorKind::kInvalidArgument, w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::kDomain, w) {}
};

// Raised when a queue load reaches 1. `constraint` names the violated
// stability condition (C2, C3, C4 or the pure-scheme analogue).
class InstabilityError : public Error {
 public:
  InstabilityError(std::string constraint, const std::string& w)
      : Error(ErrorKind::kInstability, w), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class SingularityError : public Error {
 public:
  SingularityError(std::string denominator, const std::string& w)
      : Error(ErrorKind::kSingularity, w), denominator_(std::move(denominator)) {}
  const std::string& denominator() const noexcept { return denominator_; }

 private:
  std::string denominator_;
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& w)
      : Error(ErrorKind::kInfeasible, w) {}
};

class ConfigError : public Error {
 public:
  ConfigError(int line, std::string key, const std::string& w)
      : Error(ErrorKind::kConfig, format(line, key, w)),
        line_(line),
        key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(int line, const std::string& key,
                            const std::string& w) {
    std::string s = "config";
    if (line > 0) s += " line " + std::to_string(line);
    if (!key.empty()) s += " [" + key + "]";
    return s + ": " + w;
  }
  int line_;
  std::string key_;
};

struct InsufficientSamplesError : Error {
  explicit InsufficientSamplesError(const std::string& w)
      : Error(ErrorKind::kInsufficientSamples, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::kIo, w) {}
};

}  // namespace aoimec
