#pragma once

#include <stdexcept>
#include <string>

namespace dfp {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Raised when apply_edge is handed a pair that is not open.
class InvalidTransition : public Error {
 public:
  using Error::Error;
};

/// The open set is empty. Natural end of the process, not a fault.
class ProcessTerminated : public Error {
 public:
  ProcessTerminated() : Error("process terminated: no open pairs remain") {}
};

/// The ODE right-hand side divides by q = q0 + q1; raised when q <= 0.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfp
