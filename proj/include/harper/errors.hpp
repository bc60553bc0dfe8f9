#pragma once

#include <stdexcept>
#include <string>

namespace harper {

// Error taxonomy mirrored by the CLI exit codes (1/2/3).
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace harper
