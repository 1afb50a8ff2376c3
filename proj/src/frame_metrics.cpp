#include "pedaleval/frame_metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pedaleval/error.hpp"

namespace pedaleval {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes)
    : n_(n_classes), counts_(n_classes * n_classes, 0) {
  if (n_classes == 0) throw Error(ErrorCode::parameter, "confusion matrix needs >= 1 class");
}

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes, std::vector<std::uint64_t> row_major_counts)
    : n_(n_classes), counts_(std::move(row_major_counts)) {
  if (n_classes == 0 || counts_.size() != n_classes * n_classes) {
    throw Error(ErrorCode::parameter, "confusion counts must form an n x n grid");
  }
}

ConfusionMatrix ConfusionMatrix::from_labels(std::size_t n_classes, std::span<const int> reference,
                                             std::span<const int> predicted) {
  if (reference.size() != predicted.size()) {
    throw Error(ErrorCode::alignment, "label sequences differ in length");
  }
  ConfusionMatrix m(n_classes);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const int r = reference[i];
    const int p = predicted[i];
    if (r < 0 || p < 0 || static_cast<std::size_t>(r) >= n_classes ||
        static_cast<std::size_t>(p) >= n_classes) {
      throw Error(ErrorCode::parameter, "label out of range at frame " + std::to_string(i));
    }
    m.add(static_cast<std::size_t>(r), static_cast<std::size_t>(p));
  }
  return m;
}

void ConfusionMatrix::add(std::size_t ref, std::size_t pred, std::uint64_t count) {
  counts_.at(ref * n_ + pred) += count;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::reference_support(std::size_t k) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < n_; ++j) s += at(k, j);
  return s;
}

std::uint64_t ConfusionMatrix::predicted_count(std::size_t k) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n_; ++i) s += at(i, k);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw Error(ErrorCode::parameter, "confusion matrices differ in size");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

ClassScores class_scores(const ConfusionMatrix& confusion, AbsentClassPolicy absent) {
  const std::uint64_t total = confusion.total();
  if (total == 0) throw Error(ErrorCode::empty_input, "confusion matrix holds no frames");

  const std::size_t n = confusion.n_classes();
  ClassScores out;
  out.per_class.resize(n);
  out.support.resize(n);

  Scores macro_sum;
  std::size_t macro_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t tp = confusion.at(k, k);
    const std::uint64_t support = confusion.reference_support(k);
    const std::uint64_t predicted = confusion.predicted_count(k);
    out.support[k] = support;

    Scores s;
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, support);
    s.f1 = harmonic(s.precision, s.recall);

    const bool present = support > 0 || predicted > 0;
    if (present) out.per_class[k] = s;
    if (present || absent == AbsentClassPolicy::zero) {
      macro_sum.precision += s.precision;
      macro_sum.recall += s.recall;
      macro_sum.f1 += s.f1;
      ++macro_count;
    }
    const auto w = static_cast<double>(support);
    out.weighted.precision += w * s.precision;
    out.weighted.recall += w * s.recall;
    out.weighted.f1 += w * s.f1;
  }
  const double m = static_cast<double>(macro_count);
  out.macro = {macro_sum.precision / m, macro_sum.recall / m, macro_sum.f1 / m};
  const auto t = static_cast<double>(total);
  out.weighted = {out.weighted.precision / t, out.weighted.recall / t, out.weighted.f1 / t};
  return out;
}

Scores prf(const ConfusionMatrix& confusion, Averaging averaging, AbsentClassPolicy absent) {
  const ClassScores s = class_scores(confusion, absent);
  return averaging == Averaging::macro ? s.macro : s.weighted;
}

std::vector<int> binarize(const PedalCurve& curve, double threshold) {
  std::vector<int> out;
  out.reserve(curve.size());
  for (double v : curve.values()) out.push_back(v >= threshold ? 1 : 0);
  return out;
}

std::vector<int> quantize4(const PedalCurve& curve) {
  std::vector<int> out;
  out.reserve(curve.size());
  for (double v : curve.values()) out.push_back(std::min(static_cast<int>(v * 4.0), 3));
  return out;
}

namespace {

struct ErrorSums {
  double squared = 0.0;
  double absolute = 0.0;
};

ErrorSums error_sums(const AlignedPair& pair) {
  ErrorSums s;
  const auto ref = pair.reference().values();
  const auto est = pair.estimate().values();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = est[i] - ref[i];
    s.squared += d * d;
    s.absolute += std::abs(d);
  }
  return s;
}

}  // namespace

RegressionErrors regression_errors(const AlignedPair& pair) {
  const ErrorSums s = error_sums(pair);
  const auto n = static_cast<double>(pair.size());
  return {s.squared / n, s.absolute / n};
}

FrameReport evaluate_frames(const AlignedPair& pair, const FrameConfig& config) {
  if (!(config.binary_threshold > 0.0 && config.binary_threshold < 1.0)) {
    throw Error(ErrorCode::config, "frame.binary_threshold must lie in (0,1)");
  }
  const auto ref_bin = binarize(pair.reference(), config.binary_threshold);
  const auto est_bin = binarize(pair.estimate(), config.binary_threshold);
  const auto ref_q = quantize4(pair.reference());
  const auto est_q = quantize4(pair.estimate());

  FrameReport report{
      .n_frames = pair.size(),
      .binary = {{}, ConfusionMatrix::from_labels(2, ref_bin, est_bin)},
      .fourclass = {{}, ConfusionMatrix::from_labels(4, ref_q, est_q)},
      .errors = {},
  };
  report.binary.scores = class_scores(report.binary.confusion);
  report.fourclass.scores = class_scores(report.fourclass.confusion);
  const ErrorSums sums = error_sums(pair);
  report.sum_squared_error = sums.squared;
  report.sum_absolute_error = sums.absolute;
  const auto n = static_cast<double>(pair.size());
  report.errors = {sums.squared / n, sums.absolute / n};
  return report;
}

}  // namespace pedaleval
