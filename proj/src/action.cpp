#include "pedaleval/action.hpp"

#include <algorithm>
#include <sstream>

#include "pedaleval/error.hpp"

namespace pedaleval {

namespace {

// Windows of depth values in [0,1] whose centered sum of squares falls below
// this are constant up to rounding.
constexpr double kFlatWindowSumSquares = 1e-20;

}  // namespace

std::string to_string(ActionState state) {
  switch (state) {
    case ActionState::press: return "press";
    case ActionState::hold: return "hold";
    case ActionState::release: return "release";
  }
  return "hold";
}

ActionState parse_action_state(const std::string& name) {
  for (ActionState s : kActionStates) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::parse, "unknown action state '" + name + "'");
}

void ActionConfig::validate() const {
  if (window_frames < 3 || window_frames % 2 == 0) {
    throw Error(ErrorCode::config, "action.window_frames must be odd and >= 3");
  }
  if (!(slope_threshold > 0.0)) throw Error(ErrorCode::config, "action.slope_threshold must be > 0");
  if (!(r2_min >= 0.0 && r2_min <= 1.0)) {
    throw Error(ErrorCode::config, "action.r2_min must lie in [0,1]");
  }
}

WindowFit window_fit(std::span<const double> values, std::size_t center, int window_frames) {
  if (values.empty() || center >= values.size()) return {};
  const auto half = static_cast<std::size_t>(std::max(window_frames, 1) / 2);
  const std::size_t lo = center > half ? center - half : 0;
  const std::size_t hi = std::min(values.size() - 1, center + half);
  const std::size_t n = hi - lo + 1;
  if (n < 2) return {};

  // Centered sums; x is the offset from the window start.
  const double x_mean = static_cast<double>(n - 1) / 2.0;
  double y_mean = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) y_mean += values[i];
  y_mean /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double dx = static_cast<double>(i - lo) - x_mean;
    const double dy = values[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (syy <= kFlatWindowSumSquares) return {};

  const double slope = sxy / sxx;
  const double ss_res = std::max(syy - slope * sxy, 0.0);
  return {slope, std::clamp(1.0 - ss_res / syy, 0.0, 1.0)};
}

std::vector<ActionState> classify_frame_actions(const PedalCurve& curve, const ActionConfig& config) {
  config.validate();
  const auto values = curve.values();
  std::vector<ActionState> states(values.size(), ActionState::hold);
  for (std::size_t t = 0; t < values.size(); ++t) {
    const WindowFit fit = window_fit(values, t, config.window_frames);
    if (fit.r2 < config.r2_min) continue;
    if (fit.slope > config.slope_threshold) {
      states[t] = ActionState::press;
    } else if (fit.slope < -config.slope_threshold) {
      states[t] = ActionState::release;
    }
  }
  return states;
}

std::vector<ActionSegment> segments_from_states(std::span<const ActionState> states) {
  if (states.empty()) throw Error(ErrorCode::empty_input, "no action states to segment");
  std::vector<ActionSegment> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= states.size(); ++i) {
    if (i == states.size() || states[i] != states[start]) {
      out.push_back({states[start], start, i - 1});
      start = i;
    }
  }
  return out;
}

std::vector<ActionState> states_from_segments(std::span<const ActionSegment> segments) {
  std::vector<ActionState> out;
  for (const ActionSegment& s : segments) {
    if (s.start_frame != out.size() || s.end_frame < s.start_frame) {
      throw Error(ErrorCode::parameter, "segments must be ordered and gap-free");
    }
    out.insert(out.end(), s.end_frame - s.start_frame + 1, s.state);
  }
  return out;
}

std::string segments_to_csv(std::span<const ActionSegment> segments) {
  std::ostringstream out;
  out << "state,start_frame,end_frame\n";
  for (const ActionSegment& s : segments) {
    out << to_string(s.state) << ',' << s.start_frame << ',' << s.end_frame << '\n';
  }
  return out.str();
}

ConfusionMatrix action_confusion(std::span<const ActionState> reference,
                                 std::span<const ActionState> estimate) {
  if (reference.size() != estimate.size()) {
    throw Error(ErrorCode::alignment, "action state sequences differ in length");
  }
  ConfusionMatrix m(3);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    m.add(static_cast<std::size_t>(reference[i]), static_cast<std::size_t>(estimate[i]));
  }
  return m;
}

ActionReport evaluate_actions(const AlignedPair& pair, const ActionConfig& config) {
  const auto ref = classify_frame_actions(pair.reference(), config);
  const auto est = classify_frame_actions(pair.estimate(), config);

  ActionReport report;
  report.confusion = action_confusion(ref, est);
  report.scores = class_scores(report.confusion);
  report.reference_segments = segments_from_states(ref);
  report.estimate_segments = segments_from_states(est);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ++report.reference_frames[static_cast<std::size_t>(ref[i])];
    ++report.estimate_frames[static_cast<std::size_t>(est[i])];
  }
  return report;
}

}  // namespace pedaleval
