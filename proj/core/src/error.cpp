#include "lanecurate/error.hpp"

namespace lanecurate {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kCapacity: return "capacity error";
    case ErrorKind::kDegenerateCurve: return "degenerate curve";
    case ErrorKind::kUndefinedMatching: return "undefined matching";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace lanecurate
