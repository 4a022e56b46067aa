#pragma once

#include <stdexcept>
#include <string>

namespace hdrank {

// Error categories map 1:1 onto the CLI's machine-parsable failure line
// ("error:<category>: message").
enum class ErrorCategory {
  usage,    // bad flags / arguments
  io,       // file system failures
  format,   // malformed input files
  domain,   // values outside the search-space domains
  config,   // invalid configuration values
  internal, // broken invariant
};

inline const char* to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::io: return "io";
    case ErrorCategory::format: return "format";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::config: return "config";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace hdrank
