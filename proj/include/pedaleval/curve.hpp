#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pedaleval {

/// Default analysis rate: 500-frame windows spanning 5 s.
inline constexpr double kDefaultFrameRateHz = 100.0;

/// A sustain-pedal depth signal sampled at a fixed frame rate. Depths are
/// normalized to [0, 1] (CC64 / 127). Construction validates every value, so
/// an existing PedalCurve is always well formed.
class PedalCurve {
 public:
  PedalCurve(double frame_rate_hz, std::vector<double> values, std::string source_id = {});

  double frame_rate_hz() const noexcept { return frame_rate_hz_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::string& source_id() const noexcept { return source_id_; }
  double duration_seconds() const noexcept {
    return static_cast<double>(values_.size() - 1) / frame_rate_hz_;
  }

  PedalCurve with_source_id(std::string id) const;

  friend bool operator==(const PedalCurve&, const PedalCurve&) = default;

 private:
  double frame_rate_hz_;
  std::vector<double> values_;
  std::string source_id_;
};

/// Reference and estimate with identical rate and length.
class AlignedPair {
 public:
  AlignedPair(PedalCurve reference, PedalCurve estimate);

  const PedalCurve& reference() const noexcept { return reference_; }
  const PedalCurve& estimate() const noexcept { return estimate_; }
  std::size_t size() const noexcept { return reference_.size(); }
  double frame_rate_hz() const noexcept { return reference_.frame_rate_hz(); }

 private:
  PedalCurve reference_;
  PedalCurve estimate_;
};

enum class AlignPolicy { truncate, strict };

AlignPolicy parse_align_policy(const std::string& name);
std::string to_string(AlignPolicy policy);

/// Linear interpolation onto a grid at target_rate_hz. The output starts at
/// t = 0 and covers the full source span; a final grid point that falls past
/// the last source sample takes the last source value.
PedalCurve resample(const PedalCurve& curve, double target_rate_hz);

/// Frame rates must match exactly; lengths are reconciled by policy.
AlignedPair align(const PedalCurve& reference, const PedalCurve& estimate, AlignPolicy policy);

/// A depth change at an absolute time, as produced by two-column CSV or CC64.
struct StepEvent {
  double time_seconds;
  double value;
};

/// Zero-order hold of time-ordered events on the grid i / rate for
/// i = 0 .. floor(end_seconds * rate). An event at exactly a grid instant
/// takes effect on that frame. Depth is 0 before the first event.
std::vector<double> sample_and_hold(std::span<const StepEvent> events, double end_seconds,
                                    double frame_rate_hz);

}  // namespace pedaleval
