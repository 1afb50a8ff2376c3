#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pedaleval/curve.hpp"
#include "pedaleval/gesture.hpp"

namespace pedaleval {

/// Portable seeded randomness. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; uniforms take the top 53 bits and
/// normals use the Box-Muller cosine branch, so one seed yields the same
/// bytes on every conforming platform. std::*_distribution is avoided on
/// purpose: its algorithms are implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi);  // [lo, hi], modulo-reduced
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Depth every synthetic gesture frame sits at or above. It is above the
/// default onset threshold, so rendered gestures segment exactly.
inline constexpr double kGestureFloorDepth = 0.06;

struct GestureSpec {
  GestureCategory category = GestureCategory::highland;
  std::size_t duration_frames = 200;
  double peak_depth = 0.8;
  double attack_fraction = 0.1;
  double release_fraction = 0.1;
  double oscillation_amplitude = 0.0;  // mountain only, fraction of the rise
  double oscillation_period = 0.0;     // mountain only, frames
  std::uint64_t seed = 0;

  /// Parameters a script may omit for this category.
  static GestureSpec defaults(GestureCategory category);
};

/// Piecewise-linear / sinusoidal archetype for the requested category. The
/// result is checked against classify_gesture under the default config and
/// a spec error is thrown when the spec cannot produce its category.
std::vector<double> gen_gesture(const GestureSpec& spec);

/// Draws parameters from ranges that always satisfy the category.
GestureSpec random_gesture_spec(GestureCategory category, std::uint64_t seed);

/// Shifts by shift_frames (positive delays; the vacated frames repeat the
/// edge value), adds N(0, jitter_sigma^2) noise and clamps to [0,1].
std::vector<double> perturb(std::span<const double> values, double jitter_sigma, int shift_frames,
                            std::uint64_t seed);

struct PlainGap {
  std::size_t frames = 0;
};

using ScriptItem = std::variant<GestureSpec, PlainGap>;

struct CurveScript {
  double frame_rate_hz = kDefaultFrameRateHz;
  std::vector<ScriptItem> items;
};

struct RenderedScript {
  PedalCurve curve;
  std::vector<CategorizedInterval> intervals;  // gestures and gaps in order
  std::vector<GestureCategory> frame_categories;
};

/// Concatenates gestures and zero-valued gaps. Two gestures may not touch:
/// they would merge into one gesture under segmentation.
RenderedScript render_script(const CurveScript& script);

/// n_gestures random gestures, each preceded by a random gap, plus a
/// trailing gap.
CurveScript random_script(std::uint64_t seed, std::size_t n_gestures,
                          double frame_rate_hz = kDefaultFrameRateHz);

CurveScript parse_script_json(std::string_view text);
std::string script_to_json(const CurveScript& script);

/// `{"frame_rate_hz", "length", "intervals": [{category, start, end}]}`.
std::string annotations_to_json(const RenderedScript& rendered);

}  // namespace pedaleval
