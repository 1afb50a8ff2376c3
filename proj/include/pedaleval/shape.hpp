#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pedaleval/curve.hpp"
#include "pedaleval/gesture.hpp"

namespace pedaleval {

struct ShapeConfig {
  std::size_t fourier_k = 11;

  void validate() const;
};

/// Keeps DFT bins 0 .. min(k, n) - 1 together with their conjugate mirrors
/// n - b, zeroes everything else and transforms back. Only the retained bins
/// are evaluated, so the cost is O(n * k).
std::vector<double> lowpass_reconstruct(std::span<const double> values, std::size_t k);

double mean_squared_difference(std::span<const double> a, std::span<const double> b);

/// MSE between the low-pass reconstructions of two equal-length segments.
double fourier_mse(std::span<const double> reference, std::span<const double> estimate,
                   std::size_t k);

/// Landmarks: first, last, median (mean of the two middle values for even
/// lengths), arithmetic mean, maximum.
std::array<double, 5> five_points(std::span<const double> values);

double five_point_mse(std::span<const double> reference, std::span<const double> estimate);

/// Scores for one reference interval.
struct IntervalScore {
  GestureCategory category;
  FrameInterval frames;
  double five_point_mse;
  double fourier_mse;
  double raw_mse;
};

/// Running duration-weighted sums for one category (or overall).
struct ShapeAccumulator {
  std::size_t n_intervals = 0;
  std::uint64_t n_frames = 0;
  double weighted_five_point = 0.0;  // sum of frames * mse
  double weighted_fourier = 0.0;
  double weighted_raw = 0.0;
  double sum_five_point = 0.0;       // sum of per-interval mse
  double sum_fourier = 0.0;

  void add(const IntervalScore& s);
  ShapeAccumulator& operator+=(const ShapeAccumulator& other);

  double five_point_mse() const;  // duration weighted
  double fourier_mse() const;
  double raw_mse() const;
  double five_point_mse_unweighted() const;
  double fourier_mse_unweighted() const;
};

struct GestureReport {
  std::vector<IntervalScore> intervals;
  std::map<GestureCategory, ShapeAccumulator> per_category;  // every category present
  ShapeAccumulator overall;
  CategoryFrameCounts reference_counts{};
  CategoryFrameCounts estimate_counts{};
  std::vector<Gesture> reference_gestures;
  std::vector<Gesture> estimate_gestures;

  CategoryDistribution distribution_reference() const { return distribution_from_counts(reference_counts); }
  CategoryDistribution distribution_estimate() const { return distribution_from_counts(estimate_counts); }
};

/// Segments the reference, scores both curves over every reference interval
/// (plain runs included) and aggregates duration-weighted means. The
/// estimate is segmented on its own only for its category distribution.
GestureReport evaluate_gestures(const AlignedPair& pair, const GestureConfig& gesture_config,
                                const ShapeConfig& shape_config);

/// `category,start,end,five_point_mse,fourier_mse` with header.
std::string intervals_to_csv(std::span<const IntervalScore> intervals);

}  // namespace pedaleval
