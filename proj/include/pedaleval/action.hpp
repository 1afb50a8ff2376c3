#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pedaleval/curve.hpp"
#include "pedaleval/frame_metrics.hpp"

namespace pedaleval {

enum class ActionState : int { press = 0, hold = 1, release = 2 };

inline constexpr std::array<ActionState, 3> kActionStates = {ActionState::press, ActionState::hold,
                                                             ActionState::release};

std::string to_string(ActionState state);
ActionState parse_action_state(const std::string& name);

struct ActionConfig {
  int window_frames = 19;         // odd, >= 3
  double slope_threshold = 0.005;  // depth per frame
  double r2_min = 0.5;

  void validate() const;
};

struct WindowFit {
  double slope = 0.0;  // depth per frame
  double r2 = 0.0;
};

/// Ordinary least squares of value on frame index over the window centered
/// at `center`, clipped to the sequence. A window with no variance gets
/// slope 0 and r2 0.
WindowFit window_fit(std::span<const double> values, std::size_t center, int window_frames);

/// press: slope > threshold with r2 >= r2_min; release: slope < -threshold
/// with r2 >= r2_min; hold otherwise.
std::vector<ActionState> classify_frame_actions(const PedalCurve& curve, const ActionConfig& config);

struct ActionSegment {
  ActionState state;
  std::size_t start_frame;
  std::size_t end_frame;  // inclusive
  friend bool operator==(const ActionSegment&, const ActionSegment&) = default;
};

std::vector<ActionSegment> segments_from_states(std::span<const ActionState> states);
std::vector<ActionState> states_from_segments(std::span<const ActionSegment> segments);

/// `state,start_frame,end_frame` with header.
std::string segments_to_csv(std::span<const ActionSegment> segments);

struct ActionReport {
  ClassScores scores;  // indexed by ActionState
  ConfusionMatrix confusion{3};
  std::vector<ActionSegment> reference_segments;
  std::vector<ActionSegment> estimate_segments;
  std::array<std::uint64_t, 3> reference_frames{};  // per-state frame counts
  std::array<std::uint64_t, 3> estimate_frames{};
};

ActionReport evaluate_actions(const AlignedPair& pair, const ActionConfig& config);

/// Frame-wise 3-class comparison of two state sequences.
ConfusionMatrix action_confusion(std::span<const ActionState> reference,
                                 std::span<const ActionState> estimate);

}  // namespace pedaleval
