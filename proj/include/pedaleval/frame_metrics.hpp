#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pedaleval/curve.hpp"

namespace pedaleval {

/// Square count grid; rows are reference classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes);
  ConfusionMatrix(std::size_t n_classes, std::vector<std::uint64_t> row_major_counts);

  /// Tallies paired labels. Labels must lie in [0, n_classes).
  static ConfusionMatrix from_labels(std::size_t n_classes, std::span<const int> reference,
                                     std::span<const int> predicted);

  std::size_t n_classes() const noexcept { return n_; }
  std::uint64_t at(std::size_t ref, std::size_t pred) const { return counts_[ref * n_ + pred]; }
  void add(std::size_t ref, std::size_t pred, std::uint64_t count = 1);
  std::uint64_t total() const noexcept;
  std::uint64_t reference_support(std::size_t k) const;
  std::uint64_t predicted_count(std::size_t k) const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  friend bool operator==(const Scores&, const Scores&) = default;
};

enum class Averaging { macro, weighted };

/// How macro averaging treats a class that appears in neither the reference
/// nor the prediction.
enum class AbsentClassPolicy {
  exclude,  // left out of the macro mean and reported as null
  zero,     // contributes P = R = F1 = 0
};

struct ClassScores {
  std::vector<std::optional<Scores>> per_class;  // nullopt: absent from both sides
  std::vector<std::uint64_t> support;
  Scores macro;
  Scores weighted;
};

/// Per-class precision, recall and F1 with a zero-denominator rule (score 0),
/// plus macro (unweighted class mean) and weighted (reference support)
/// averages. Throws empty_input on an all-zero matrix.
ClassScores class_scores(const ConfusionMatrix& confusion,
                         AbsentClassPolicy absent = AbsentClassPolicy::exclude);

Scores prf(const ConfusionMatrix& confusion, Averaging averaging,
           AbsentClassPolicy absent = AbsentClassPolicy::exclude);

/// Class 1 iff depth >= threshold.
std::vector<int> binarize(const PedalCurve& curve, double threshold);

/// Uniform quartile bins of [0,1]; the top bin is closed.
std::vector<int> quantize4(const PedalCurve& curve);

struct RegressionErrors {
  double mse = 0.0;
  double mae = 0.0;
};

RegressionErrors regression_errors(const AlignedPair& pair);

struct FrameConfig {
  double binary_threshold = 0.5;
};

struct ClassificationSection {
  ClassScores scores;
  ConfusionMatrix confusion;
};

struct FrameReport {
  std::size_t n_frames = 0;
  ClassificationSection binary;
  ClassificationSection fourclass;
  RegressionErrors errors;
  // Unnormalized sums so corpus aggregation stays exact.
  double sum_squared_error = 0.0;
  double sum_absolute_error = 0.0;
};

FrameReport evaluate_frames(const AlignedPair& pair, const FrameConfig& config);

}  // namespace pedaleval
