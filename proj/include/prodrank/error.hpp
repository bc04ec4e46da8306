#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prodrank {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row. `row` is the 1-based line number in the source file.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row), detail_(what) {}
  std::size_t row() const noexcept { return row_; }
  /// The message without the row prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t row_;
  std::string detail_;
};

/// Well-formed input that breaks a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingBaselineError : public Error {
 public:
  MissingBaselineError(int year, const std::string& category)
      : Error("no baseline for (" + std::to_string(year) + ", " + category + ")"),
        year_(year),
        category_(category) {}
  int year() const noexcept { return year_; }
  const std::string& category() const noexcept { return category_; }

 private:
  int year_;
  std::string category_;
};

}  // namespace prodrank
