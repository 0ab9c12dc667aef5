#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metamine {

// Base of every error raised by the library. The C API maps each subclass to
// a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown variable in a projection or similar schema misuse.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// An atom names a relation that does not exist, or has the wrong arity.
class BindingError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Metaquery rejected for the requested instantiation type, or a malformed
// argument (threshold out of range, bad gadget input, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// apply() on an instantiation that leaves some pattern undefined, or
// compose() on a non-agreeing pair.
class InstantiationError : public Error {
 public:
  using Error::Error;
};

// The brute-force oracle refuses instances above its size guard.
class OracleRefused : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace metamine
