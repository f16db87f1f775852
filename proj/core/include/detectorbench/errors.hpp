// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

#include <stdexcept>
#include <string>

namespace detectorbench {

/// A smoothed-off context has zero probability mass (delta = 0 and the
/// context was never observed in training).
class ZeroMassContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset files that fail validation (parse errors, duplicate ids, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document could not be scored; carries the offending document id.
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Correlation is undefined for the given points (zero variance).
class UndefinedCorrelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Remote backend: request could not be delivered after retries.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Remote backend: the server answered, but the payload is malformed or
/// violates a scoring invariant. Carries an excerpt of the payload.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Remote backend: endpoint/model configuration does not match the server.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace detectorbench
