#pragma once

#include <stdexcept>
#include <string>

namespace qbench {

// Base class for every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The input uses a construct the harness deliberately does not support.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Exact classical simulation was requested beyond the configured width cap.
class CapacityError : public Error {
 public:
  CapacityError(int requested, int cap)
      : Error("not practical at this width: " + std::to_string(requested) +
              " qubits requested, simulation cap is " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  int requested() const { return requested_; }
  int cap() const { return cap_; }

 private:
  int requested_;
  int cap_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A bitstring with zero ideal probability was scored by a log-likelihood metric.
class InfiniteSurprisalError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace qbench
