#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracksketch {

enum class ErrorCategory {
  usage,
  io,
  config,
  parse,
  range,
  empty_sketch,
  shape,
  empty_foreground,
  insufficient_data,
  exclusivity,
  format,
  degenerate_geometry,
  incomplete_stats,
};

std::string_view to_string(ErrorCategory category);

/// Base exception for every failure raised by the library. The category is
/// what the command line surface maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

inline Error config_error(const std::string& message) {
  return Error(ErrorCategory::config, message);
}

}  // namespace tracksketch
