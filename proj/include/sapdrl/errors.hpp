#pragma once

#include <stdexcept>
#include <string>

namespace sapdrl {

/// Invalid configuration (bad flag combination, malformed config file,
/// incompatible env/agent/guidance choice). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// API misuse: stepping a finished episode, backward without a forward
/// cache, labelling a transition the AP function cannot see.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Non-finite values where finite ones are required. CLI exit code 3.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, corrupt, or topology-mismatched parameter file.
class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sapdrl
