#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pedaleval {

enum class ErrorCode {
  parse,
  empty_input,
  range,
  schema,
  format,
  unsupported_format,
  insufficient_data,
  alignment,
  rate_mismatch,
  parameter,
  spec,
  not_computed,
  io,
  config,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported as an Error carrying a code the
/// C API maps one-to-one onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pedaleval
