#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pedaleval/curve.hpp"
#include "pedaleval/error.hpp"

namespace pedaleval::testing {

/// Code of the pedaleval::Error thrown by f, or nullopt if f returns.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

inline PedalCurve curve(std::vector<double> values, double rate = 100.0) {
  return PedalCurve(rate, std::move(values));
}

inline std::vector<double> ramp(std::size_t n, double start, double step) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

}  // namespace pedaleval::testing
