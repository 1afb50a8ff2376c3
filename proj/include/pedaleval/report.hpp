#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedaleval/action.hpp"
#include "pedaleval/config.hpp"
#include "pedaleval/curve.hpp"
#include "pedaleval/error.hpp"
#include "pedaleval/frame_metrics.hpp"
#include "pedaleval/shape.hpp"

namespace pedaleval {

enum Level : unsigned {
  kFrameLevel = 1u << 0,
  kActionLevel = 1u << 1,
  kGestureLevel = 1u << 2,
  kAllLevels = kFrameLevel | kActionLevel | kGestureLevel,
};

struct EvalOptions {
  unsigned levels = kAllLevels;
  bool include_curves = false;  // needed for curve_overlay plot data
  unsigned jobs = 1;
};

struct PairFailure {
  ErrorCode code;
  std::string message;
};

struct PairResult {
  std::string reference_path;
  std::string estimate_path;
  std::string reference_digest;  // SHA-256 of the input bytes, when read from disk
  std::string estimate_digest;
  std::optional<PairFailure> failure;

  std::size_t n_frames = 0;
  double frame_rate_hz = 0.0;
  std::optional<FrameReport> frame;
  std::optional<ActionReport> action;
  std::optional<GestureReport> gesture;
  std::optional<AlignedPair> curves;

  bool ok() const noexcept { return !failure.has_value(); }
};

struct EvalReport {
  EvalConfig config;
  unsigned levels = kAllLevels;
  std::vector<PairResult> pairs;

  std::size_t failed_count() const;
};

struct ManifestEntry {
  std::filesystem::path reference;
  std::filesystem::path estimate;
};

/// CSV with header `reference,estimate`; relative paths resolve against
/// base_dir.
std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const std::filesystem::path& base_dir);

/// Runs the selected evaluators on an already aligned pair.
PairResult evaluate_aligned(const AlignedPair& pair, const EvalConfig& config,
                            const EvalOptions& options);

/// Loads, resamples to io.frame_rate_hz, aligns per io.align_policy and
/// evaluates. Load and alignment errors propagate with the file path.
PairResult evaluate_pair(const std::filesystem::path& reference,
                         const std::filesystem::path& estimate, const EvalConfig& config,
                         const EvalOptions& options);

/// Evaluates every entry (concurrently when options.jobs > 1). A failing
/// pair is recorded in its slot and the run continues.
EvalReport evaluate_corpus(std::span<const ManifestEntry> manifest, const EvalConfig& config,
                           const EvalOptions& options);

struct JsonOptions {
  bool precise = false;  // otherwise 6 significant digits
  std::optional<std::string> timestamp;
};

/// Keys are sorted, so equal reports serialize to identical bytes.
std::string report_to_json(const EvalReport& report, const JsonOptions& options = {});

enum class PlotKind { distribution_bars, curve_overlay, segment_timeline };

PlotKind parse_plot_kind(const std::string& name);

/// Neutral series document for external plotting. pair_index < 0 selects the
/// corpus aggregate where that makes sense (distribution_bars); otherwise
/// the given pair. Throws not_computed when the report lacks the section.
std::string emit_plot_data(std::string_view report_json, PlotKind kind, long pair_index);

std::string sha256_hex(std::string_view bytes);

std::string_view tool_version();

}  // namespace pedaleval
