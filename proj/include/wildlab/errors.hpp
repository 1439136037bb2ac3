#pragma once

#include <stdexcept>
#include <string>

namespace wildlab {

// Error classes map to CLI exit codes: config/io -> 2, numeric -> 3,
// certification failure under --strict -> 4.

class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wildlab
