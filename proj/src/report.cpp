#include "pedaleval/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <tuple>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <openssl/evp.h>

#include "pedaleval/curve_io.hpp"
#include "pedaleval/gesture.hpp"

namespace pedaleval {

using nlohmann::json;

std::string_view tool_version() { return PEDALEVAL_VERSION_STRING; }

std::size_t EvalReport::failed_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const PairResult& p) { return !p.ok(); }));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 digest failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorCode::parse, "manifest line " + std::to_string(line_no) +
                                        ": expected 'reference,estimate'");
    }
    const std::string ref = trim(line.substr(0, comma));
    const std::string est = trim(line.substr(comma + 1));
    if (!header_seen) {
      header_seen = true;
      if (ref == "reference" && est == "estimate") continue;
      throw Error(ErrorCode::parse, "manifest must start with header 'reference,estimate'");
    }
    auto resolve = [&base_dir](const std::string& p) {
      const std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    out.push_back({resolve(ref), resolve(est)});
  }
  if (!header_seen) throw Error(ErrorCode::empty_input, "manifest is empty");
  return out;
}

PairResult evaluate_aligned(const AlignedPair& pair, const EvalConfig& config,
                            const EvalOptions& options) {
  config.validate();
  PairResult result;
  result.n_frames = pair.size();
  result.frame_rate_hz = pair.frame_rate_hz();
  if (options.levels & kFrameLevel) result.frame = evaluate_frames(pair, config.frame);
  if (options.levels & kActionLevel) result.action = evaluate_actions(pair, config.action);
  if (options.levels & kGestureLevel) {
    result.gesture = evaluate_gestures(pair, config.gesture, config.shape);
  }
  if (options.include_curves) result.curves = pair;
  return result;
}

PairResult evaluate_pair(const std::filesystem::path& reference,
                         const std::filesystem::path& estimate, const EvalConfig& config,
                         const EvalOptions& options) {
  const std::string ref_bytes = read_text_file(reference);
  const std::string est_bytes = read_text_file(estimate);
  const PedalCurve ref =
      load_curve_bytes(ref_bytes, reference, config.io.frame_rate_hz, config.io.csv_rate_hz);
  const PedalCurve est =
      load_curve_bytes(est_bytes, estimate, config.io.frame_rate_hz, config.io.csv_rate_hz);

  AlignedPair pair = [&] {
    try {
      return align(ref, est, config.io.align_policy);
    } catch (const Error& e) {
      throw Error(e.code(), reference.string() + " vs " + estimate.string() + ": " + e.what());
    }
  }();
  PairResult result = evaluate_aligned(pair, config, options);
  result.reference_path = reference.string();
  result.estimate_path = estimate.string();
  result.reference_digest = sha256_hex(ref_bytes);
  result.estimate_digest = sha256_hex(est_bytes);
  return result;
}

EvalReport evaluate_corpus(std::span<const ManifestEntry> manifest, const EvalConfig& config,
                           const EvalOptions& options) {
  config.validate();
  EvalReport report;
  report.config = config;
  report.levels = options.levels;
  report.pairs.resize(manifest.size());

  auto run_one = [&](std::size_t i) {
    const ManifestEntry& entry = manifest[i];
    PairResult& slot = report.pairs[i];
    try {
      slot = evaluate_pair(entry.reference, entry.estimate, config, options);
    } catch (const Error& e) {
      slot.failure = PairFailure{e.code(), e.what()};
    } catch (const std::exception& e) {
      slot.failure = PairFailure{ErrorCode::io, e.what()};
    }
    slot.reference_path = entry.reference.string();
    slot.estimate_path = entry.estimate.string();
  };

  const std::size_t workers = std::min<std::size_t>(std::max(options.jobs, 1u), manifest.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < manifest.size(); ++i) run_one(i);
    return report;
  }
  // Each worker writes only its own slots; the join is the only synchronization.
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < manifest.size(); i = next++) run_one(i);
      });
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

class Writer {
 public:
  explicit Writer(bool precise) : precise_(precise) {}

  json num(double v) const {
    if (precise_ || !std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
  }

  json scores(const Scores& s) const {
    return {{"precision", num(s.precision)}, {"recall", num(s.recall)}, {"f1", num(s.f1)}};
  }

  json confusion(const ConfusionMatrix& m) const {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n_classes(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.n_classes(); ++j) row.push_back(m.at(i, j));
      rows.push_back(row);
    }
    return rows;
  }

  json classification(const ClassScores& s, const ConfusionMatrix& m,
                      const std::vector<std::string>& labels) const {
    json per_class = json::object();
    json support = json::object();
    for (std::size_t k = 0; k < labels.size(); ++k) {
      per_class[labels[k]] = s.per_class[k] ? scores(*s.per_class[k]) : json(nullptr);
      support[labels[k]] = s.support[k];
    }
    json out = scores(s.weighted);  // headline numbers use support weighting
    out["macro"] = scores(s.macro);
    out["weighted"] = scores(s.weighted);
    out["macro_f1"] = num(s.macro.f1);
    out["weighted_f1"] = num(s.weighted.f1);
    out["per_class"] = per_class;
    out["support"] = support;
    out["labels"] = labels;
    out["confusion"] = confusion(m);
    return out;
  }

  json shape(const ShapeAccumulator& a) const {
    return {{"five_point_mse", num(a.five_point_mse())},
            {"fourier_mse", num(a.fourier_mse())},
            {"raw_mse", num(a.raw_mse())},
            {"five_point_mse_unweighted", num(a.five_point_mse_unweighted())},
            {"fourier_mse_unweighted", num(a.fourier_mse_unweighted())},
            {"n_gestures", a.n_intervals},
            {"n_frames", a.n_frames}};
  }

  json distribution(const CategoryFrameCounts& counts) const {
    json out = json::object();
    for (const auto& [c, share] : distribution_from_counts(counts)) out[to_string(c)] = num(share);
    return out;
  }

  json action_distribution(const std::array<std::uint64_t, 3>& counts) const {
    const std::uint64_t total = counts[0] + counts[1] + counts[2];
    json out = json::object();
    for (ActionState s : kActionStates) {
      const auto n = counts[static_cast<std::size_t>(s)];
      out[to_string(s)] = num(total ? static_cast<double>(n) / static_cast<double>(total) : 0.0);
    }
    return out;
  }

  json values(std::span<const double> v) const {
    json out = json::array();
    for (double x : v) out.push_back(num(x));
    return out;
  }

 private:
  bool precise_;
};

const std::vector<std::string> kBinaryLabels = {"off", "on"};
const std::vector<std::string> kQuartileLabels = {"q0", "q1", "q2", "q3"};

std::vector<std::string> action_labels() {
  std::vector<std::string> out;
  for (ActionState s : kActionStates) out.push_back(to_string(s));
  return out;
}

json frame_json(const Writer& w, const FrameReport& f, const FrameConfig& config) {
  json binary = w.classification(f.binary.scores, f.binary.confusion, kBinaryLabels);
  binary["threshold"] = w.num(config.binary_threshold);
  json fourclass = w.classification(f.fourclass.scores, f.fourclass.confusion, kQuartileLabels);
  fourclass["bin_edges"] = {0.0, 0.25, 0.5, 0.75, 1.0};
  return {{"n_frames", f.n_frames},
          {"binary", binary},
          {"fourclass", fourclass},
          {"mse", w.num(f.errors.mse)},
          {"mae", w.num(f.errors.mae)}};
}

json segments_json(std::span<const ActionSegment> segments) {
  json out = json::array();
  for (const ActionSegment& s : segments) {
    out.push_back({{"state", to_string(s.state)}, {"start_frame", s.start_frame}, {"end_frame", s.end_frame}});
  }
  return out;
}

json action_json(const Writer& w, const ActionReport& a) {
  json out = w.classification(a.scores, a.confusion, action_labels());
  out["distribution"] = {{"reference", w.action_distribution(a.reference_frames)},
                         {"estimate", w.action_distribution(a.estimate_frames)}};
  out["segments"] = {{"reference", segments_json(a.reference_segments)},
                     {"estimate", segments_json(a.estimate_segments)}};
  return out;
}

json gesture_summary_json(const Writer& w, const std::map<GestureCategory, ShapeAccumulator>& per_category,
                          const ShapeAccumulator& overall, const CategoryFrameCounts& ref_counts,
                          const CategoryFrameCounts& est_counts) {
  json per = json::object();
  for (const auto& [c, acc] : per_category) per[to_string(c)] = w.shape(acc);
  return {{"per_category", per},
          {"weighted", w.shape(overall)},
          {"distribution", {{"reference", w.distribution(ref_counts)}, {"estimate", w.distribution(est_counts)}}}};
}

json gesture_json(const Writer& w, const GestureReport& g) {
  json out = gesture_summary_json(w, g.per_category, g.overall, g.reference_counts, g.estimate_counts);
  json intervals = json::array();
  for (const IntervalScore& s : g.intervals) {
    intervals.push_back({{"category", to_string(s.category)},
                         {"start", s.frames.start},
                         {"end", s.frames.end},
                         {"five_point_mse", w.num(s.five_point_mse)},
                         {"fourier_mse", w.num(s.fourier_mse)},
                         {"raw_mse", w.num(s.raw_mse)}});
  }
  out["intervals"] = intervals;
  return out;
}

json levels_json(unsigned levels) {
  json out = json::array();
  if (levels & kFrameLevel) out.push_back("frame");
  if (levels & kActionLevel) out.push_back("action");
  if (levels & kGestureLevel) out.push_back("gesture");
  return out;
}

// Corpus aggregate. Pairs are reduced in path order so the result does not
// depend on manifest order.
json aggregate_json(const Writer& w, const EvalReport& report) {
  std::vector<const PairResult*> ok;
  for (const PairResult& p : report.pairs) {
    if (p.ok()) ok.push_back(&p);
  }
  std::stable_sort(ok.begin(), ok.end(), [](const PairResult* a, const PairResult* b) {
    return std::tie(a->reference_path, a->estimate_path) < std::tie(b->reference_path, b->estimate_path);
  });

  std::uint64_t n_frames = 0;
  for (const PairResult* p : ok) n_frames += p->n_frames;

  json out = {{"n_pairs", report.pairs.size()},
              {"n_failed", report.failed_count()},
              {"n_frames", n_frames}};
  if (ok.empty()) return out;

  unsigned levels = report.levels;
  for (const PairResult* p : ok) {
    if (!p->frame) levels &= ~kFrameLevel;
    if (!p->action) levels &= ~kActionLevel;
    if (!p->gesture) levels &= ~kGestureLevel;
  }

  if (levels & kFrameLevel) {
    auto weighted_mean = [&](auto&& pick) {
      Scores s;
      for (const PairResult* p : ok) {
        const double wgt = static_cast<double>(p->n_frames) / static_cast<double>(n_frames);
        const Scores& x = pick(*p->frame);
        s.precision += wgt * x.precision;
        s.recall += wgt * x.recall;
        s.f1 += wgt * x.f1;
      }
      return s;
    };
    ConfusionMatrix bin(2);
    ConfusionMatrix quad(4);
    double sse = 0.0;
    double sae = 0.0;
    for (const PairResult* p : ok) {
      bin += p->frame->binary.confusion;
      quad += p->frame->fourclass.confusion;
      sse += p->frame->sum_squared_error;
      sae += p->frame->sum_absolute_error;
    }
    auto section = [&](auto&& pick_section, const ConfusionMatrix& summed) {
      const Scores weighted = weighted_mean([&](const FrameReport& f) -> const Scores& {
        return pick_section(f).scores.weighted;
      });
      const Scores macro = weighted_mean([&](const FrameReport& f) -> const Scores& {
        return pick_section(f).scores.macro;
      });
      json j = w.scores(weighted);
      j["weighted"] = w.scores(weighted);
      j["macro"] = w.scores(macro);
      j["confusion"] = w.confusion(summed);
      return j;
    };
    const auto nf = static_cast<double>(n_frames);
    out["frame"] = {
        {"binary", section([](const FrameReport& f) -> const ClassificationSection& { return f.binary; }, bin)},
        {"fourclass", section([](const FrameReport& f) -> const ClassificationSection& { return f.fourclass; }, quad)},
        {"mse", w.num(sse / nf)},
        {"mae", w.num(sae / nf)},
        {"n_frames", n_frames}};
  }

  if (levels & kActionLevel) {
    ConfusionMatrix summed(3);
    std::array<std::uint64_t, 3> ref_frames{};
    std::array<std::uint64_t, 3> est_frames{};
    for (const PairResult* p : ok) {
      summed += p->action->confusion;
      for (std::size_t k = 0; k < 3; ++k) {
        ref_frames[k] += p->action->reference_frames[k];
        est_frames[k] += p->action->estimate_frames[k];
      }
    }
    json a = w.classification(class_scores(summed), summed, action_labels());
    a["distribution"] = {{"reference", w.action_distribution(ref_frames)},
                         {"estimate", w.action_distribution(est_frames)}};
    out["action"] = a;
  }

  if (levels & kGestureLevel) {
    std::map<GestureCategory, ShapeAccumulator> per;
    for (GestureCategory c : kGestureCategories) per[c] = {};
    ShapeAccumulator overall;
    CategoryFrameCounts ref_counts{};
    CategoryFrameCounts est_counts{};
    for (const PairResult* p : ok) {
      for (const auto& [c, acc] : p->gesture->per_category) per[c] += acc;
      overall += p->gesture->overall;
      for (std::size_t k = 0; k < ref_counts.size(); ++k) {
        ref_counts[k] += p->gesture->reference_counts[k];
        est_counts[k] += p->gesture->estimate_counts[k];
      }
    }
    out["gesture"] = gesture_summary_json(w, per, overall, ref_counts, est_counts);
  }
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report, const JsonOptions& options) {
  const Writer w(options.precise);
  json pairs = json::array();
  json inputs = json::array();
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const PairResult& p = report.pairs[i];
    json j = {{"index", i}, {"reference", p.reference_path}, {"estimate", p.estimate_path}};
    if (!p.ok()) {
      j["status"] = "failed";
      j["error"] = {{"code", std::string(to_string(p.failure->code))}, {"message", p.failure->message}};
      pairs.push_back(j);
      continue;
    }
    j["status"] = "ok";
    j["n_frames"] = p.n_frames;
    j["frame_rate_hz"] = p.frame_rate_hz;
    if (p.frame) j["frame"] = frame_json(w, *p.frame, report.config.frame);
    if (p.action) j["action"] = action_json(w, *p.action);
    if (p.gesture) j["gesture"] = gesture_json(w, *p.gesture);
    if (p.curves) {
      j["curves"] = {{"reference", w.values(p.curves->reference().values())},
                     {"estimate", w.values(p.curves->estimate().values())}};
    }
    pairs.push_back(j);
    inputs.push_back(
        {{"index", i}, {"reference", p.reference_digest}, {"estimate", p.estimate_digest}});
  }

  json provenance = {{"tool", "pedaleval"},
                     {"version", std::string(tool_version())},
                     {"float_format", options.precise ? "shortest-roundtrip" : "6 significant digits"},
                     {"levels", levels_json(report.levels)},
                     {"input_sha256", inputs}};
  if (options.timestamp) provenance["timestamp"] = *options.timestamp;

  const json doc = {{"config", json::parse(config_to_json(report.config))},
                    {"pairs", pairs},
                    {"aggregate", aggregate_json(w, report)},
                    {"provenance", provenance}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Plot data

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "distribution_bars") return PlotKind::distribution_bars;
  if (name == "curve_overlay") return PlotKind::curve_overlay;
  if (name == "segment_timeline") return PlotKind::segment_timeline;
  throw Error(ErrorCode::parameter,
              "unknown plot kind '" + name + "' (distribution_bars|curve_overlay|segment_timeline)");
}

namespace {

std::string color_of(const std::string& label) {
  static const std::map<std::string, std::string> kColors = {
      {"press", "yellow"},     {"hold", "pink"},       {"release", "blue"},
      {"pinnacle", "crimson"}, {"hill", "orange"},     {"highland", "seagreen"},
      {"mountain", "purple"},  {"plain", "lightgray"}, {"reference", "black"},
      {"estimate", "darkorange"}};
  const auto it = kColors.find(label);
  return it == kColors.end() ? "gray" : it->second;
}

const json& pair_at(const json& report, long index) {
  const json& pairs = report.at("pairs");
  if (index < 0 || static_cast<std::size_t>(index) >= pairs.size()) {
    throw Error(ErrorCode::parameter, "pair index " + std::to_string(index) + " out of range");
  }
  const json& p = pairs[static_cast<std::size_t>(index)];
  if (p.value("status", "") != "ok") {
    throw Error(ErrorCode::not_computed, "pair " + std::to_string(index) + " failed to evaluate");
  }
  return p;
}

json stacked_bars(const json& shares, const std::string& row, const std::string& level) {
  json bars = json::array();
  for (const auto& [category, value] : shares.items()) {
    if (value.get<double>() <= 0.0) continue;
    bars.push_back({{"category", category}, {"value", value}, {"color", color_of(category)}});
  }
  return {{"row", row}, {"level", level}, {"bars", bars}};
}

}  // namespace

std::string emit_plot_data(std::string_view report_json, PlotKind kind, long pair_index) {
  json report;
  try {
    report = json::parse(report_json);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("invalid report JSON: ") + e.what());
  }
  if (!report.is_object() || !report.contains("pairs")) {
    throw Error(ErrorCode::schema, "report JSON lacks a 'pairs' array");
  }

  json out;
  switch (kind) {
    case PlotKind::distribution_bars: {
      const json& source = pair_index < 0 ? report.at("aggregate") : pair_at(report, pair_index);
      json rows = json::array();
      if (source.contains("action")) {
        const json& d = source["action"]["distribution"];
        rows.push_back(stacked_bars(d["reference"], "reference", "action"));
        rows.push_back(stacked_bars(d["estimate"], "estimate", "action"));
      }
      if (source.contains("gesture")) {
        const json& d = source["gesture"]["distribution"];
        rows.push_back(stacked_bars(d["reference"], "reference", "gesture"));
        rows.push_back(stacked_bars(d["estimate"], "estimate", "gesture"));
      }
      if (rows.empty()) {
        throw Error(ErrorCode::not_computed, "report holds no action or gesture distribution");
      }
      out = {{"kind", "distribution_bars"}, {"rows", rows}};
      break;
    }
    case PlotKind::curve_overlay: {
      const json& p = pair_at(report, std::max(pair_index, 0L));
      if (!p.contains("curves")) {
        throw Error(ErrorCode::not_computed, "report was produced without curves (--include-curves)");
      }
      json series = json::array();
      for (const char* label : {"reference", "estimate"}) {
        series.push_back({{"label", label}, {"color", color_of(label)}, {"values", p["curves"][label]}});
      }
      out = {{"kind", "curve_overlay"}, {"frame_rate_hz", p.at("frame_rate_hz")}, {"series", series}};
      break;
    }
    case PlotKind::segment_timeline: {
      const json& p = pair_at(report, std::max(pair_index, 0L));
      if (!p.contains("action") && !p.contains("gesture")) {
        throw Error(ErrorCode::not_computed, "report holds no action segments or gesture intervals");
      }
      json tracks = json::array();
      if (p.contains("action")) {
        for (const char* label : {"reference", "estimate"}) {
          json segs = json::array();
          for (const json& s : p["action"]["segments"][label]) {
            json seg = s;
            seg["color"] = color_of(s["state"].get<std::string>());
            segs.push_back(seg);
          }
          tracks.push_back({{"label", std::string(label) + " actions"}, {"segments", segs}});
        }
      }
      if (p.contains("gesture")) {
        json segs = json::array();
        for (const json& iv : p["gesture"]["intervals"]) {
          const std::string c = iv["category"].get<std::string>();
          segs.push_back({{"category", c}, {"start_frame", iv["start"]}, {"end_frame", iv["end"]},
                          {"color", color_of(c)}});
        }
        tracks.push_back({{"label", "reference gestures"}, {"segments", segs}});
      }
      out = {{"kind", "segment_timeline"}, {"frame_rate_hz", p.at("frame_rate_hz")}, {"tracks", tracks}};
      break;
    }
  }
  return out.dump(2) + "\n";
}

}  // namespace pedaleval
