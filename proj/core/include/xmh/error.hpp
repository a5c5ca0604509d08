#pragma once

#include <stdexcept>
#include <string>

namespace xmh {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  invalid_label,
  io_failure,
  bad_format,
  version_mismatch,
  truncated_file,
  inconsistent_model,
  singular_matrix,
  divergence,
  check_failed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace xmh
