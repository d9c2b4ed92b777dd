#pragma once

#include <stdexcept>
#include <string>

namespace qtrack {

// Error categories map one-to-one onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, NumericError -> 4.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtrack
