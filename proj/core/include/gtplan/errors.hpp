#pragma once

#include <stdexcept>
#include <string>

namespace gtplan {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorCategory {
  invalid_lane,
  off_road,
  parse,
  validation,
  override_key,
  infeasible,
  degenerate_speed,
  io,
};

const char* to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& what)
      : std::runtime_error(what), cat_(cat) {}
  ErrorCategory category() const { return cat_; }

 private:
  ErrorCategory cat_;
};

[[noreturn]] inline void fail(ErrorCategory cat, const std::string& msg) {
  throw Error(cat, msg);
}

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_lane: return "invalid-lane";
    case ErrorCategory::off_road: return "off-road";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::override_key: return "override";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::degenerate_speed: return "degenerate-speed";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

}  // namespace gtplan
