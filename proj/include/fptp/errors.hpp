#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fptp {

// Base for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCollectionError : public Error {
 public:
  using Error::Error;
};

class UnknownFieldError : public Error {
 public:
  explicit UnknownFieldError(const std::string& field)
      : Error("unknown field '" + field + "'"), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownPlanError : public Error {
 public:
  using Error::Error;
};

class MissingIndexError : public Error {
 public:
  using Error::Error;
};

class InvalidQueryError : public Error {
 public:
  using Error::Error;
};

class UndefinedProductivityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fptp
