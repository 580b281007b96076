#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace atomiso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed surface syntax. Carries a 1-based line/column.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Relation symbol or atom literal not in the backend's vocabulary.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// A formula was evaluated under a valuation missing one of its free variables.
class ValuationError : public Error {
 public:
  using Error::Error;
};

/// Backend is not dense (no independent atoms exist).
class DensenessError : public Error {
 public:
  using Error::Error;
};

/// A parameter of an expression is missing from a declared support.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of a map or function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource budget would be exceeded.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t required)
      : Error(what), required_(required) {}

  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Structure or function failed validation (arity, containment, schema).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two structures do not share a signature or a backend.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace atomiso
