#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace effcost {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A spec failed validation, or a builder was given an inconsistent config.
class SpecError : public Error {
 public:
  using Error::Error;
};

// A 64-bit count accumulator would wrap.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (JSON, CSV). `offset` is a byte offset when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = npos)
      : Error(what), offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Some records lack an indicator an operation requires.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::string> offenders)
      : Error(what), offenders_(std::move(offenders)) {}

  [[nodiscard]] const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

// Too few comparable records for an analysis.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace effcost
