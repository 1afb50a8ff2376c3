#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pedaleval/action.hpp"
#include "pedaleval/curve.hpp"
#include "pedaleval/frame_metrics.hpp"
#include "pedaleval/gesture.hpp"
#include "pedaleval/shape.hpp"

namespace pedaleval {

struct IoConfig {
  double frame_rate_hz = kDefaultFrameRateHz;  // analysis rate
  double csv_rate_hz = kDefaultFrameRateHz;    // rate of single-column CSV inputs
  AlignPolicy align_policy = AlignPolicy::truncate;
};

struct EvalConfig {
  FrameConfig frame;
  ActionConfig action;
  GestureConfig gesture;
  ShapeConfig shape;
  IoConfig io;

  void validate() const;

  /// Overrides one setting by dotted path, e.g. "action.window_frames".
  /// Hyphens in the path are read as underscores.
  void set(std::string_view path, std::string_view value);

  static std::vector<std::string> keys();

  friend bool operator==(const EvalConfig& a, const EvalConfig& b);
};

/// Missing sections and keys keep their defaults; unknown keys are errors.
EvalConfig parse_config_json(std::string_view text);
std::string config_to_json(const EvalConfig& config);

}  // namespace pedaleval
