#include "pedaleval/shape.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "format.hpp"
#include "pedaleval/error.hpp"

namespace pedaleval {

void ShapeConfig::validate() const {
  if (fourier_k < 1) throw Error(ErrorCode::config, "shape.fourier_k must be >= 1");
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::alignment, "segments differ in length (" + std::to_string(a.size()) +
                                          " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

std::vector<double> lowpass_reconstruct(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  const std::size_t keep = std::min(std::max<std::size_t>(k, 1), n);
  if (2 * keep > n) {
    return std::vector<double>(values.begin(), values.end());  // every bin is retained
  }

  // Bins 1..keep-1 and their mirrors are distinct here, so each contributes
  // 2 Re(X_b e^{2 pi i b t / n}).
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<double> cos_table(n);
  std::vector<double> sin_table(n);
  for (std::size_t m = 0; m < n; ++m) {
    cos_table[m] = std::cos(step * static_cast<double>(m));
    sin_table[m] = std::sin(step * static_cast<double>(m));
  }

  std::vector<std::complex<double>> bins(keep);
  for (std::size_t b = 0; b < keep; ++b) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t m = (b * t) % n;
      re += values[t] * cos_table[m];
      im -= values[t] * sin_table[m];
    }
    bins[b] = {re, im};
  }

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = bins[0].real();
    for (std::size_t b = 1; b < keep; ++b) {
      const std::size_t m = (b * t) % n;
      acc += 2.0 * (bins[b].real() * cos_table[m] - bins[b].imag() * sin_table[m]);
    }
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

double mean_squared_difference(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double fourier_mse(std::span<const double> reference, std::span<const double> estimate,
                   std::size_t k) {
  require_same_length(reference, estimate);
  return mean_squared_difference(lowpass_reconstruct(reference, k),
                                 lowpass_reconstruct(estimate, k));
}

std::array<double, 5> five_points(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "five-point landmarks need >= 1 value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  return {values.front(), values.back(), median, mean, sorted.back()};
}

double five_point_mse(std::span<const double> reference, std::span<const double> estimate) {
  require_same_length(reference, estimate);
  const auto a = five_points(reference);
  const auto b = five_points(estimate);
  return mean_squared_difference(a, b);
}

void ShapeAccumulator::add(const IntervalScore& s) {
  const auto w = static_cast<double>(s.frames.length());
  ++n_intervals;
  n_frames += s.frames.length();
  weighted_five_point += w * s.five_point_mse;
  weighted_fourier += w * s.fourier_mse;
  weighted_raw += w * s.raw_mse;
  sum_five_point += s.five_point_mse;
  sum_fourier += s.fourier_mse;
}

ShapeAccumulator& ShapeAccumulator::operator+=(const ShapeAccumulator& other) {
  n_intervals += other.n_intervals;
  n_frames += other.n_frames;
  weighted_five_point += other.weighted_five_point;
  weighted_fourier += other.weighted_fourier;
  weighted_raw += other.weighted_raw;
  sum_five_point += other.sum_five_point;
  sum_fourier += other.sum_fourier;
  return *this;
}

namespace {

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

double ShapeAccumulator::five_point_mse() const {
  return safe_div(weighted_five_point, static_cast<double>(n_frames));
}
double ShapeAccumulator::fourier_mse() const {
  return safe_div(weighted_fourier, static_cast<double>(n_frames));
}
double ShapeAccumulator::raw_mse() const {
  return safe_div(weighted_raw, static_cast<double>(n_frames));
}
double ShapeAccumulator::five_point_mse_unweighted() const {
  return safe_div(sum_five_point, static_cast<double>(n_intervals));
}
double ShapeAccumulator::fourier_mse_unweighted() const {
  return safe_div(sum_fourier, static_cast<double>(n_intervals));
}

GestureReport evaluate_gestures(const AlignedPair& pair, const GestureConfig& gesture_config,
                                const ShapeConfig& shape_config) {
  shape_config.validate();
  const GestureSegmentation ref_seg = segment_gestures(pair.reference(), gesture_config);
  const GestureSegmentation est_seg = segment_gestures(pair.estimate(), gesture_config);

  GestureReport report;
  for (GestureCategory c : kGestureCategories) report.per_category[c] = {};

  const auto ref = pair.reference().values();
  const auto est = pair.estimate().values();
  for (const CategorizedInterval& iv : ordered_intervals(ref_seg)) {
    const auto r = ref.subspan(iv.frames.start, iv.frames.length());
    const auto e = est.subspan(iv.frames.start, iv.frames.length());
    const IntervalScore score{.category = iv.category,
                              .frames = iv.frames,
                              .five_point_mse = five_point_mse(r, e),
                              .fourier_mse = fourier_mse(r, e, shape_config.fourier_k),
                              .raw_mse = mean_squared_difference(r, e)};
    report.per_category[iv.category].add(score);
    report.overall.add(score);
    report.intervals.push_back(score);
  }
  report.reference_counts = category_frame_counts(ref_seg);
  report.estimate_counts = category_frame_counts(est_seg);
  report.reference_gestures = ref_seg.gestures;
  report.estimate_gestures = est_seg.gestures;
  return report;
}

std::string intervals_to_csv(std::span<const IntervalScore> intervals) {
  std::ostringstream out;
  out << "category,start,end,five_point_mse,fourier_mse\n";
  for (const IntervalScore& s : intervals) {
    out << to_string(s.category) << ',' << s.frames.start << ',' << s.frames.end << ','
        << detail::shortest(s.five_point_mse) << ',' << detail::shortest(s.fourier_mse) << '\n';
  }
  return out.str();
}

}  // namespace pedaleval
