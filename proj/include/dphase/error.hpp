#pragma once

#include <stdexcept>
#include <string>

namespace dphase {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  Eval,
  Config,
  Domain,
  NoRoot,
  Bracket,
  NotConverged,
  Io,
};

/// Library-wide exception. `code()` maps one-to-one onto the C API status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in a coefficient expression, carrying the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(ErrorCode::Parse, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dphase
