#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pedaleval/curve.hpp"

namespace pedaleval {

enum class GestureCategory : int { pinnacle = 0, hill = 1, highland = 2, mountain = 3, plain = 4 };

inline constexpr std::array<GestureCategory, 5> kGestureCategories = {
    GestureCategory::pinnacle, GestureCategory::hill, GestureCategory::highland,
    GestureCategory::mountain, GestureCategory::plain};

std::string to_string(GestureCategory category);
GestureCategory parse_gesture_category(const std::string& name);

struct GestureConfig {
  double epsilon = 0.05;                 // gesture onset/offset depth
  double theta = 0.65;                   // near-max fraction for the ratio
  double ratio_split = 0.65;             // high/low ratio boundary
  std::size_t duration_threshold_frames = 100;

  void validate() const;
};

struct FrameInterval {
  std::size_t start;
  std::size_t end;  // inclusive
  std::size_t length() const noexcept { return end - start + 1; }
  friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

struct Gesture {
  std::size_t start_frame;
  std::size_t end_frame;  // inclusive
  std::vector<double> values;
  GestureCategory category;
  double max_depth;
  double max_depth_ratio;

  std::size_t duration() const noexcept { return values.size(); }
};

struct GestureSegmentation {
  std::vector<Gesture> gestures;
  std::vector<FrameInterval> plain_intervals;
};

/// Fraction of frames at or above theta * max(values).
double max_depth_ratio(std::span<const double> values, double theta);

GestureCategory classify_gesture(std::size_t duration_frames, double ratio,
                                 const GestureConfig& config);
GestureCategory classify_gesture(const Gesture& gesture, const GestureConfig& config);

/// Maximal runs strictly above epsilon become classified gestures (runs
/// touching either end of the curve included); the rest are plain.
GestureSegmentation segment_gestures(const PedalCurve& curve, const GestureConfig& config);

/// A labeled interval in frame order; gestures and plain runs together
/// partition [0, length).
struct CategorizedInterval {
  GestureCategory category;
  FrameInterval frames;
  friend bool operator==(const CategorizedInterval&, const CategorizedInterval&) = default;
};

std::vector<CategorizedInterval> ordered_intervals(const GestureSegmentation& segmentation);

using CategoryDistribution = std::map<GestureCategory, double>;
using CategoryFrameCounts = std::array<std::uint64_t, 5>;

CategoryFrameCounts category_frame_counts(const GestureSegmentation& segmentation);

/// Share of total frames per category; every category is present.
CategoryDistribution distribution_from_counts(const CategoryFrameCounts& counts);

CategoryDistribution gesture_distribution(const PedalCurve& curve, const GestureConfig& config);

/// `category,start_frame,end_frame,max_depth,ratio` with header.
std::string gestures_to_csv(std::span<const Gesture> gestures);

}  // namespace pedaleval
