#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace landbubble {

/// Bad or inconsistent input data. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimation could not be carried out on otherwise valid data. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// log of a non-positive value and similar.
class DomainError : public DataError {
 public:
  using DataError::DataError;
};

/// Operation would silently bridge missing periods.
class GapError : public DataError {
 public:
  using DataError::DataError;
};

class SingularDesignError : public NumericalError {
 public:
  SingularDesignError(const std::string& what, std::vector<std::string> columns)
      : NumericalError(what), columns_(std::move(columns)) {}

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

class NoValidWindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NestingViolationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace landbubble
