#include "pedaleval/gesture.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "format.hpp"
#include "pedaleval/error.hpp"

namespace pedaleval {

std::string to_string(GestureCategory category) {
  switch (category) {
    case GestureCategory::pinnacle: return "pinnacle";
    case GestureCategory::hill: return "hill";
    case GestureCategory::highland: return "highland";
    case GestureCategory::mountain: return "mountain";
    case GestureCategory::plain: return "plain";
  }
  return "plain";
}

GestureCategory parse_gesture_category(const std::string& name) {
  for (GestureCategory c : kGestureCategories) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::parse, "unknown gesture category '" + name + "'");
}

void GestureConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::config, "gesture.epsilon must lie in (0,1)");
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::config, "gesture.theta must lie in (0,1)");
  if (!(ratio_split > 0.0 && ratio_split <= 1.0)) {
    throw Error(ErrorCode::config, "gesture.ratio_split must lie in (0,1]");
  }
  if (duration_threshold_frames == 0) {
    throw Error(ErrorCode::config, "gesture.duration_threshold_frames must be positive");
  }
}

double max_depth_ratio(std::span<const double> values, double theta) {
  if (values.empty()) return 0.0;
  const double cut = theta * *std::max_element(values.begin(), values.end());
  const auto near_max = std::count_if(values.begin(), values.end(), [cut](double v) { return v >= cut; });
  return static_cast<double>(near_max) / static_cast<double>(values.size());
}

GestureCategory classify_gesture(std::size_t duration_frames, double ratio,
                                 const GestureConfig& config) {
  const bool is_long = duration_frames >= config.duration_threshold_frames;
  const bool high = ratio >= config.ratio_split;
  if (is_long) return high ? GestureCategory::highland : GestureCategory::mountain;
  return high ? GestureCategory::pinnacle : GestureCategory::hill;
}

GestureCategory classify_gesture(const Gesture& gesture, const GestureConfig& config) {
  return classify_gesture(gesture.duration(), gesture.max_depth_ratio, config);
}

GestureSegmentation segment_gestures(const PedalCurve& curve, const GestureConfig& config) {
  config.validate();
  const auto v = curve.values();
  GestureSegmentation out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    const bool above = v[i] > config.epsilon;
    while (j + 1 < v.size() && (v[j + 1] > config.epsilon) == above) ++j;
    if (above) {
      Gesture g{.start_frame = i,
                .end_frame = j,
                .values = std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i),
                                              v.begin() + static_cast<std::ptrdiff_t>(j) + 1),
                .category = GestureCategory::plain,
                .max_depth = 0.0,
                .max_depth_ratio = 0.0};
      g.max_depth = *std::max_element(g.values.begin(), g.values.end());
      g.max_depth_ratio = max_depth_ratio(g.values, config.theta);
      g.category = classify_gesture(g, config);
      out.gestures.push_back(std::move(g));
    } else {
      out.plain_intervals.push_back({i, j});
    }
    i = j + 1;
  }
  return out;
}

std::vector<CategorizedInterval> ordered_intervals(const GestureSegmentation& segmentation) {
  std::vector<CategorizedInterval> out;
  out.reserve(segmentation.gestures.size() + segmentation.plain_intervals.size());
  for (const Gesture& g : segmentation.gestures) out.push_back({g.category, {g.start_frame, g.end_frame}});
  for (const FrameInterval& p : segmentation.plain_intervals) out.push_back({GestureCategory::plain, p});
  std::sort(out.begin(), out.end(), [](const CategorizedInterval& a, const CategorizedInterval& b) {
    return a.frames.start < b.frames.start;
  });
  return out;
}

CategoryFrameCounts category_frame_counts(const GestureSegmentation& segmentation) {
  CategoryFrameCounts counts{};
  for (const Gesture& g : segmentation.gestures) {
    counts[static_cast<std::size_t>(g.category)] += g.duration();
  }
  for (const FrameInterval& p : segmentation.plain_intervals) {
    counts[static_cast<std::size_t>(GestureCategory::plain)] += p.length();
  }
  return counts;
}

CategoryDistribution distribution_from_counts(const CategoryFrameCounts& counts) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  CategoryDistribution out;
  for (GestureCategory c : kGestureCategories) {
    const std::uint64_t n = counts[static_cast<std::size_t>(c)];
    out[c] = total == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(total);
  }
  return out;
}

CategoryDistribution gesture_distribution(const PedalCurve& curve, const GestureConfig& config) {
  return distribution_from_counts(category_frame_counts(segment_gestures(curve, config)));
}

std::string gestures_to_csv(std::span<const Gesture> gestures) {
  std::ostringstream out;
  out << "category,start_frame,end_frame,max_depth,ratio\n";
  for (const Gesture& g : gestures) {
    out << to_string(g.category) << ',' << g.start_frame << ',' << g.end_frame << ','
        << detail::shortest(g.max_depth) << ',' << detail::shortest(g.max_depth_ratio) << '\n';
  }
  return out.str();
}

}  // namespace pedaleval
