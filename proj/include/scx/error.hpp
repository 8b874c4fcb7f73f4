#pragma once

#include <stdexcept>
#include <string>

namespace scx {

// Error taxonomy maps onto process exit codes:
//   ArgumentError -> 2, DataError -> 3, NumericError -> 4.

class ArgumentError : public std::invalid_argument {
public:
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public DataError {
public:
  ParseError(const std::string& msg, std::size_t line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// RMSE_SVD was exactly zero; the normalized ratio is undefined but the raw
// RMSE is still meaningful and carried along.
class RatioUndefinedError : public NumericError {
public:
  RatioUndefinedError(const std::string& msg, double raw_rmse)
      : NumericError(msg), raw_rmse_(raw_rmse) {}
  double raw_rmse() const { return raw_rmse_; }

private:
  double raw_rmse_;
};

}  // namespace scx
