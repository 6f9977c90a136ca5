#pragma once

#include <stdexcept>
#include <string>

namespace swallowtail {

/// Base class for errors that the CLI maps onto stable exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

/// Malformed, inconsistent or unknown model.
class ModelError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

}  // namespace swallowtail
