#include "pedaleval/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pedaleval/error.hpp"

namespace pedaleval {

namespace {

// Guards floor/ceil against products such as 0.02 * 100 = 2.0000000000000004.
constexpr double kGridSlack = 1e-9;

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::range: return "range";
    case ErrorCode::schema: return "schema";
    case ErrorCode::format: return "format";
    case ErrorCode::unsupported_format: return "unsupported_format";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::alignment: return "alignment";
    case ErrorCode::rate_mismatch: return "rate_mismatch";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::spec: return "spec";
    case ErrorCode::not_computed: return "not_computed";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

PedalCurve::PedalCurve(double frame_rate_hz, std::vector<double> values, std::string source_id)
    : frame_rate_hz_(frame_rate_hz), values_(std::move(values)), source_id_(std::move(source_id)) {
  if (!(frame_rate_hz_ > 0.0) || !std::isfinite(frame_rate_hz_)) {
    throw Error(ErrorCode::parameter, "frame rate must be positive and finite");
  }
  if (values_.empty()) {
    throw Error(ErrorCode::empty_input, "pedal curve must hold at least one frame");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream msg;
      msg << "depth at frame " << i << " is " << v << ", outside [0,1]";
      throw Error(ErrorCode::range, msg.str());
    }
  }
}

PedalCurve PedalCurve::with_source_id(std::string id) const {
  PedalCurve copy = *this;
  copy.source_id_ = std::move(id);
  return copy;
}

AlignedPair::AlignedPair(PedalCurve reference, PedalCurve estimate)
    : reference_(std::move(reference)), estimate_(std::move(estimate)) {
  if (reference_.frame_rate_hz() != estimate_.frame_rate_hz()) {
    std::ostringstream msg;
    msg << "frame rate mismatch: reference " << reference_.frame_rate_hz() << " Hz, estimate "
        << estimate_.frame_rate_hz() << " Hz";
    throw Error(ErrorCode::rate_mismatch, msg.str());
  }
  if (reference_.size() != estimate_.size()) {
    std::ostringstream msg;
    msg << "length mismatch: reference " << reference_.size() << " frames, estimate "
        << estimate_.size() << " frames";
    throw Error(ErrorCode::alignment, msg.str());
  }
}

AlignPolicy parse_align_policy(const std::string& name) {
  if (name == "truncate") return AlignPolicy::truncate;
  if (name == "strict") return AlignPolicy::strict;
  throw Error(ErrorCode::config, "unknown align policy '" + name + "' (expected truncate|strict)");
}

std::string to_string(AlignPolicy policy) {
  return policy == AlignPolicy::truncate ? "truncate" : "strict";
}

PedalCurve resample(const PedalCurve& curve, double target_rate_hz) {
  if (!(target_rate_hz > 0.0) || !std::isfinite(target_rate_hz)) {
    throw Error(ErrorCode::parameter, "target frame rate must be positive and finite");
  }
  if (target_rate_hz == curve.frame_rate_hz()) return curve;
  if (curve.size() < 2) {
    throw Error(ErrorCode::insufficient_data, "cannot resample a single-frame curve to a new rate");
  }

  const double span = curve.duration_seconds();
  const auto n_out = static_cast<std::size_t>(std::ceil(span * target_rate_hz - kGridSlack)) + 1;
  const auto src = curve.values();
  const std::size_t last = src.size() - 1;

  std::vector<double> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = std::min(static_cast<double>(j) / target_rate_hz, span);
    const double pos = t * curve.frame_rate_hz();
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= last) {
      out[j] = src[last];
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out[j] = std::clamp(src[i] + (src[i + 1] - src[i]) * frac, 0.0, 1.0);
  }
  return PedalCurve(target_rate_hz, std::move(out), curve.source_id());
}

AlignedPair align(const PedalCurve& reference, const PedalCurve& estimate, AlignPolicy policy) {
  if (reference.frame_rate_hz() != estimate.frame_rate_hz()) {
    std::ostringstream msg;
    msg << "frame rate mismatch: reference " << reference.frame_rate_hz() << " Hz, estimate "
        << estimate.frame_rate_hz() << " Hz (resample first)";
    throw Error(ErrorCode::rate_mismatch, msg.str());
  }
  if (reference.size() == estimate.size()) return AlignedPair(reference, estimate);
  if (policy == AlignPolicy::strict) {
    std::ostringstream msg;
    msg << "strict alignment requires equal lengths: reference " << reference.size()
        << " frames, estimate " << estimate.size() << " frames";
    throw Error(ErrorCode::alignment, msg.str());
  }
  const std::size_t n = std::min(reference.size(), estimate.size());
  auto cut = [n](const PedalCurve& c) {
    const auto v = c.values();
    return PedalCurve(c.frame_rate_hz(), std::vector<double>(v.begin(), v.begin() + n),
                      c.source_id());
  };
  return AlignedPair(cut(reference), cut(estimate));
}

std::vector<double> sample_and_hold(std::span<const StepEvent> events, double end_seconds,
                                    double frame_rate_hz) {
  const double end = std::max(end_seconds, 0.0);
  const auto n = static_cast<std::size_t>(std::floor(end * frame_rate_hz + kGridSlack)) + 1;
  std::vector<double> out(n, 0.0);

  std::size_t frame = 0;
  double current = 0.0;
  for (const StepEvent& ev : events) {
    const double at = std::ceil(ev.time_seconds * frame_rate_hz - kGridSlack);
    const std::size_t first = at <= 0.0 ? 0 : static_cast<std::size_t>(at);
    for (; frame < std::min(first, n); ++frame) out[frame] = current;
    current = ev.value;
  }
  for (; frame < n; ++frame) out[frame] = current;
  return out;
}

}  // namespace pedaleval
