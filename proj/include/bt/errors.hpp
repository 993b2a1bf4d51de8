#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace bt {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File could not be opened/read/written.
class IoError : public Error {
public:
  using Error::Error;
};

// File contents violate a documented format (bad UTF-8, header mismatch, ...).
class FormatError : public Error {
public:
  using Error::Error;
};

// Incompatible options: language-tag mismatch, dimension mismatch, bad spec string.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Inputs are well-formed but unusable: empty where data is required, sizes too
// large, unknown word lookups.
class DataError : public Error {
public:
  using Error::Error;
};

// The failure happened on the backend side of the wire: nonzero exit, HTTP
// failure, timeout.
class BackendError : public Error {
public:
  using Error::Error;
};

// The backend answered but broke the wire contract (wrong line/translation count).
class ProtocolError : public BackendError {
public:
  using BackendError::BackendError;
};

// CLI exit-code convention: 1 for validation problems, 2 for backend/protocol
// failures.
inline int exit_code_for(const std::exception& e) {
  return dynamic_cast<const BackendError*>(&e) != nullptr ? 2 : 1;
}

}  // namespace bt
