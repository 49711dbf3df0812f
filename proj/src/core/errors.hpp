#pragma once

#include <stdexcept>
#include <string>

namespace optiboost {

enum class ErrorCode {
  io,
  parse,
  label,
  empty_dataset,
  shape,
  entry,
  degenerate_pool,
  domain,
  precondition,
  numerical_drift,
  not_started,
  insufficient_history,
  digest_mismatch,
  truncated_trace,
  replay_mismatch,
  weak_learning_violation,
  perfect_hypothesis,
  internal,
};

const char* error_code_name(ErrorCode code);

/// Every library failure surfaces as Error; code() identifies which contract broke.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace optiboost
