#pragma once

#include <stdexcept>
#include <string>

namespace rowlearn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (unknown policy, width mismatch, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Row address outside [0, memory_size).
class AddressError : public Error {
 public:
  using Error::Error;
};

/// Input symbol outside the declared alphabet, or mismatched alphabets.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// Malformed machine file, graph file, or other serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rowlearn
