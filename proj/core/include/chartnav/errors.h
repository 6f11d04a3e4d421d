#ifndef CHARTNAV_ERRORS_H_
#define CHARTNAV_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chartnav {

// Base for every error the library throws. Navigation never throws; bad
// commands come back as NavStatus::kInvalid.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed structured text. line/column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed text that does not match the chart spec schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string key_path)
      : Error(message + " (at " + key_path + ")"), key_path_(std::move(key_path)) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

// Data text that cannot be read as a table.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class EmptyDataError : public Error {
 public:
  EmptyDataError() : Error("data has no rows") {}
};

// An operation was asked to treat a field as a type it cannot be.
class TypeMismatchError : public Error {
 public:
  using Error::Error;
};

// A spec that parses but does not fit its data; carries the first error issue.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A StructureConfig that the chart spec cannot satisfy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace chartnav

#endif  // CHARTNAV_ERRORS_H_
