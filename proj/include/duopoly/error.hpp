#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace duopoly {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its admissible domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A state passed into a step function violates its invariants (NaN, negative stock).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Configuration file or profile fails validation; `key` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A replication produced a non-finite state.
class ReplicationError : public Error {
 public:
  ReplicationError(int day, std::uint64_t seed, const std::string& what)
      : Error("replication seed " + std::to_string(seed) + " failed on day " + std::to_string(day) +
              ": " + what),
        day_(day),
        seed_(seed) {}
  int day() const noexcept { return day_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  int day_;
  std::uint64_t seed_;
};

/// A payoff needed for a query is absent from the empirical game.
class IncompleteGameError : public Error {
 public:
  IncompleteGameError(std::vector<std::pair<std::size_t, std::size_t>> missing, const std::string& what)
      : Error(what), missing_(std::move(missing)) {}
  const std::vector<std::pair<std::size_t, std::size_t>>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> missing_;
};

class DesignError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace duopoly
