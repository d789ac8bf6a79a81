#pragma once

#include <stdexcept>
#include <string>

namespace gossip {

// Each category maps onto one CLI exit code.
enum class ErrorKind {
  configuration = 2,
  numerical_instability = 3,
  size_budget = 4,
};

class GossipError : public std::runtime_error {
 public:
  GossipError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public GossipError {
 public:
  explicit ConfigError(const std::string& what)
      : GossipError(ErrorKind::configuration, what) {}
};

/// Parameters are individually valid but outside an operation's domain,
/// e.g. asking for a k-subset of fewer than k remaining candidates.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalInstabilityError : public GossipError {
 public:
  explicit NumericalInstabilityError(const std::string& what)
      : GossipError(ErrorKind::numerical_instability, what) {}
};

class SizeBudgetError : public GossipError {
 public:
  explicit SizeBudgetError(const std::string& what)
      : GossipError(ErrorKind::size_budget, what) {}
};

}  // namespace gossip
