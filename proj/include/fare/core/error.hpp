#pragma once

#include <stdexcept>
#include <string>

namespace fare {

/// Root of every error thrown by the toolkit. The CLI maps subclasses onto
/// exit codes (config 2, transport 3, data 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, template selection, or CLI option.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain invariant (wrong variant, out-of-range field).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for its input (empty subset, zero variance).
class UndefinedMetricError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or unreadable data files.
class DataError : public Error {
 public:
  using Error::Error;
};

/// The endpoint could not be reached or kept failing after retries.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int last_status)
      : Error(what), last_status_(last_status) {}

  /// Last HTTP status seen, or 0 when no response was received.
  int last_status() const noexcept { return last_status_; }

 private:
  int last_status_;
};

/// The endpoint answered but the body does not follow the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The rollout pool has no unseen samples left.
class PoolExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace fare
