#pragma once

#include <stdexcept>
#include <string>

namespace rtsim {

// Bad or missing configuration / input files. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent data encountered at runtime. Maps to exit code 1.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rtsim
