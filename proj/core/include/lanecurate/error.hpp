#pragma once

#include <stdexcept>
#include <string>

namespace lanecurate {

enum class ErrorKind {
  kParameter,
  kData,
  kParse,
  kIo,
  kValidation,
  kCapacity,
  kDegenerateCurve,
  kUndefinedMatching,
};

const char* to_string(ErrorKind kind);

/// Base error for everything thrown by the library. The message already
/// names the offending file, entry or pair where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& m) : Error(ErrorKind::kParameter, m) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error(ErrorKind::kData, m) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& m, std::size_t line = 0)
      : Error(ErrorKind::kParse, m), line_(line) {}
  /// 1-based line number, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error(ErrorKind::kValidation, m) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& m) : Error(ErrorKind::kCapacity, m) {}
};

class DegenerateCurveError : public Error {
 public:
  explicit DegenerateCurveError(const std::string& m)
      : Error(ErrorKind::kDegenerateCurve, m) {}
};

class UndefinedMatchingError : public Error {
 public:
  explicit UndefinedMatchingError(const std::string& m)
      : Error(ErrorKind::kUndefinedMatching, m) {}
};

}  // namespace lanecurate
