#pragma once

#include <stdexcept>
#include <string>

namespace mvbd {

// Invalid or malformed input data (CSV schema, value ranges, dimensions).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / stream failures.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration values (hyperparameters, kernel settings).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mvbd
