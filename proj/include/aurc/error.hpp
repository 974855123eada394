#pragma once

#include <stdexcept>
#include <string>

namespace aurc {

// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  Validation = 4,  // malformed or inconsistent input data
  Io = 3,          // missing / unreadable / unwritable file
  Undefined = 5,   // a quantity is mathematically undefined for the input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class UndefinedError : public Error {
 public:
  explicit UndefinedError(const std::string& what)
      : Error(ErrorKind::Undefined, what) {}
};

}  // namespace aurc
