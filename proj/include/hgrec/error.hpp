#pragma once

#include <stdexcept>
#include <string>

namespace hgrec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data or bad user-supplied configuration. The CLI maps this to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a result (singular system, no convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgrec
