#include "pedaleval/pedaleval.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "pedaleval/action.hpp"
#include "pedaleval/config.hpp"
#include "pedaleval/curve_io.hpp"
#include "pedaleval/error.hpp"
#include "pedaleval/gesture.hpp"
#include "pedaleval/report.hpp"
#include "pedaleval/smf.hpp"
#include "pedaleval/synth.hpp"

struct pe_curve {
  pedaleval::PedalCurve curve;
};

struct pe_config {
  pedaleval::EvalConfig config;
};

struct pe_report {
  pedaleval::EvalReport report;
};

namespace {

using namespace pedaleval;

thread_local std::string g_last_error;

pe_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return PE_ERR_PARSE;
    case ErrorCode::empty_input: return PE_ERR_EMPTY_INPUT;
    case ErrorCode::range: return PE_ERR_RANGE;
    case ErrorCode::schema: return PE_ERR_SCHEMA;
    case ErrorCode::format: return PE_ERR_FORMAT;
    case ErrorCode::unsupported_format: return PE_ERR_UNSUPPORTED_FORMAT;
    case ErrorCode::insufficient_data: return PE_ERR_INSUFFICIENT_DATA;
    case ErrorCode::alignment: return PE_ERR_ALIGNMENT;
    case ErrorCode::rate_mismatch: return PE_ERR_RATE_MISMATCH;
    case ErrorCode::parameter: return PE_ERR_PARAMETER;
    case ErrorCode::spec: return PE_ERR_SPEC;
    case ErrorCode::not_computed: return PE_ERR_NOT_COMPUTED;
    case ErrorCode::io: return PE_ERR_IO;
    case ErrorCode::config: return PE_ERR_CONFIG;
  }
  return PE_ERR_INTERNAL;
}

pe_status fail(pe_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
pe_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return PE_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PE_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

EvalConfig config_or_default(const pe_config* config) {
  return config ? config->config : EvalConfig{};
}

EvalOptions options_from(const pe_eval_options* options) {
  EvalOptions out;
  if (!options) return out;
  out.levels = options->levels == 0 ? kAllLevels : (options->levels & kAllLevels);
  out.include_curves = options->include_curves != 0;
  out.jobs = options->jobs == 0 ? 1 : options->jobs;
  return out;
}

#define PE_REQUIRE(cond, what)                                  \
  do {                                                          \
    if (!(cond)) return fail(PE_ERR_INVALID_ARGUMENT, (what));  \
  } while (0)

}  // namespace

extern "C" {

const char* pe_version(void) { return PEDALEVAL_VERSION_STRING; }

const char* pe_status_string(pe_status status) {
  switch (status) {
    case PE_OK: return "ok";
    case PE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PE_ERR_PARSE: return "parse error";
    case PE_ERR_EMPTY_INPUT: return "empty input";
    case PE_ERR_RANGE: return "value out of range";
    case PE_ERR_SCHEMA: return "schema error";
    case PE_ERR_FORMAT: return "format error";
    case PE_ERR_UNSUPPORTED_FORMAT: return "unsupported format";
    case PE_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case PE_ERR_ALIGNMENT: return "alignment error";
    case PE_ERR_RATE_MISMATCH: return "frame rate mismatch";
    case PE_ERR_PARAMETER: return "invalid parameter";
    case PE_ERR_SPEC: return "unsatisfiable gesture spec";
    case PE_ERR_NOT_COMPUTED: return "section not computed";
    case PE_ERR_IO: return "I/O error";
    case PE_ERR_CONFIG: return "configuration error";
    case PE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pe_last_error(void) { return g_last_error.c_str(); }

void pe_string_free(char* s) { std::free(s); }

// ---- curves ---------------------------------------------------------------

pe_status pe_curve_from_values(const double* values, size_t n, double frame_rate_hz,
                               pe_curve** out) {
  PE_REQUIRE(out && (values || n == 0), "null argument");
  return guarded([&] {
    *out = new pe_curve{PedalCurve(frame_rate_hz, std::vector<double>(values, values + n))};
  });
}

pe_status pe_curve_from_csv(const char* text, size_t len, double frame_rate_hz, pe_curve** out) {
  PE_REQUIRE(out && (text || len == 0), "null argument");
  return guarded([&] { *out = new pe_curve{load_csv({text, len}, frame_rate_hz)}; });
}

pe_status pe_curve_from_json(const char* text, size_t len, pe_curve** out) {
  PE_REQUIRE(out && (text || len == 0), "null argument");
  return guarded([&] { *out = new pe_curve{load_json({text, len})}; });
}

pe_status pe_curve_from_smf(const uint8_t* bytes, size_t len, double frame_rate_hz, pe_curve** out) {
  PE_REQUIRE(out && (bytes || len == 0), "null argument");
  return guarded([&] { *out = new pe_curve{extract_cc64_from_smf({bytes, len}, frame_rate_hz)}; });
}

pe_status pe_curve_load_file(const pe_config* config, const char* path, pe_curve** out) {
  PE_REQUIRE(out && path, "null argument");
  return guarded([&] {
    const EvalConfig c = config_or_default(config);
    *out = new pe_curve{load_curve_file(path, c.io.frame_rate_hz, c.io.csv_rate_hz)};
  });
}

void pe_curve_free(pe_curve* curve) { delete curve; }

size_t pe_curve_length(const pe_curve* curve) { return curve ? curve->curve.size() : 0; }

double pe_curve_frame_rate(const pe_curve* curve) {
  return curve ? curve->curve.frame_rate_hz() : 0.0;
}

size_t pe_curve_copy_values(const pe_curve* curve, double* out, size_t capacity) {
  if (!curve || !out) return 0;
  const auto v = curve->curve.values();
  const size_t n = std::min(capacity, v.size());
  std::copy_n(v.begin(), n, out);
  return n;
}

pe_status pe_curve_resample(const pe_curve* curve, double target_rate_hz, pe_curve** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] { *out = new pe_curve{resample(curve->curve, target_rate_hz)}; });
}

pe_status pe_curve_perturb(const pe_curve* curve, double jitter_sigma, int shift_frames,
                           uint64_t seed, pe_curve** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] {
    const PedalCurve& c = curve->curve;
    *out = new pe_curve{PedalCurve(c.frame_rate_hz(),
                                   perturb(c.values(), jitter_sigma, shift_frames, seed),
                                   c.source_id())};
  });
}

pe_status pe_curve_to_csv(const pe_curve* curve, char** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] { *out = copy_string(curve_to_csv(curve->curve)); });
}

pe_status pe_curve_to_json(const pe_curve* curve, char** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] { *out = copy_string(curve_to_json(curve->curve)); });
}

pe_status pe_curve_action_segments_csv(const pe_config* config, const pe_curve* curve, char** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] {
    const EvalConfig c = config_or_default(config);
    const auto states = classify_frame_actions(curve->curve, c.action);
    *out = copy_string(segments_to_csv(segments_from_states(states)));
  });
}

pe_status pe_curve_gestures_csv(const pe_config* config, const pe_curve* curve, char** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] {
    const EvalConfig c = config_or_default(config);
    *out = copy_string(gestures_to_csv(segment_gestures(curve->curve, c.gesture).gestures));
  });
}

pe_status pe_curve_gesture_distribution(const pe_config* config, const pe_curve* curve, char** out) {
  PE_REQUIRE(curve && out, "null argument");
  return guarded([&] {
    const EvalConfig c = config_or_default(config);
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [category, share] : gesture_distribution(curve->curve, c.gesture)) {
      doc[to_string(category)] = share;
    }
    *out = copy_string(doc.dump());
  });
}

// ---- configuration --------------------------------------------------------

pe_status pe_config_create(pe_config** out) {
  PE_REQUIRE(out, "null argument");
  return guarded([&] { *out = new pe_config{}; });
}

pe_status pe_config_from_json(const char* text, size_t len, pe_config** out) {
  PE_REQUIRE(out && (text || len == 0), "null argument");
  return guarded([&] { *out = new pe_config{parse_config_json({text, len})}; });
}

pe_status pe_config_set(pe_config* config, const char* key, const char* value) {
  PE_REQUIRE(config && key && value, "null argument");
  return guarded([&] {
    EvalConfig updated = config->config;
    updated.set(key, value);
    updated.validate();
    config->config = updated;
  });
}

pe_status pe_config_to_json(const pe_config* config, char** out) {
  PE_REQUIRE(config && out, "null argument");
  return guarded([&] { *out = copy_string(config_to_json(config->config)); });
}

pe_status pe_config_keys(char** out) {
  PE_REQUIRE(out, "null argument");
  return guarded([&] {
    std::string joined;
    for (const std::string& k : EvalConfig::keys()) joined += k + "\n";
    *out = copy_string(joined);
  });
}

void pe_config_free(pe_config* config) { delete config; }

// ---- evaluation -----------------------------------------------------------

pe_status pe_evaluate_curves(const pe_config* config, const pe_curve* reference,
                             const pe_curve* estimate, const pe_eval_options* options,
                             pe_report** out) {
  PE_REQUIRE(reference && estimate && out, "null argument");
  return guarded([&] {
    const EvalConfig c = config_or_default(config);
    const AlignedPair pair = align(reference->curve, estimate->curve, c.io.align_policy);
    PairResult result = evaluate_aligned(pair, c, options_from(options));
    result.reference_path = reference->curve.source_id();
    result.estimate_path = estimate->curve.source_id();
    auto* report = new pe_report{};
    report->report.config = c;
    report->report.levels = options_from(options).levels;
    report->report.pairs.push_back(std::move(result));
    *out = report;
  });
}

pe_status pe_evaluate_files(const pe_config* config, const char* reference_path,
                            const char* estimate_path, const pe_eval_options* options,
                            pe_report** out) {
  PE_REQUIRE(reference_path && estimate_path && out, "null argument");
  return guarded([&] {
    const ManifestEntry entry{reference_path, estimate_path};
    *out = new pe_report{evaluate_corpus({&entry, 1}, config_or_default(config), options_from(options))};
  });
}

pe_status pe_evaluate_manifest(const pe_config* config, const char* manifest_path,
                               const pe_eval_options* options, pe_report** out) {
  PE_REQUIRE(manifest_path && out, "null argument");
  return guarded([&] {
    const std::filesystem::path path(manifest_path);
    const auto entries = parse_manifest(read_text_file(path), path.parent_path());
    *out = new pe_report{evaluate_corpus(entries, config_or_default(config), options_from(options))};
  });
}

size_t pe_report_pair_count(const pe_report* report) {
  return report ? report->report.pairs.size() : 0;
}

size_t pe_report_failed_count(const pe_report* report) {
  return report ? report->report.failed_count() : 0;
}

pe_status pe_report_to_json(const pe_report* report, unsigned flags, const char* timestamp,
                            char** out) {
  PE_REQUIRE(report && out, "null argument");
  return guarded([&] {
    JsonOptions options;
    options.precise = (flags & PE_JSON_PRECISE) != 0;
    if (timestamp) options.timestamp = timestamp;
    *out = copy_string(report_to_json(report->report, options));
  });
}

namespace {

const PairResult& ok_pair(const pe_report* report, size_t index) {
  const auto& pairs = report->report.pairs;
  if (index >= pairs.size()) throw Error(ErrorCode::parameter, "pair index out of range");
  const PairResult& p = pairs[index];
  if (!p.ok()) throw Error(ErrorCode::not_computed, "pair " + std::to_string(index) + " failed");
  return p;
}

}  // namespace

pe_status pe_report_intervals_csv(const pe_report* report, size_t pair_index, char** out) {
  PE_REQUIRE(report && out, "null argument");
  return guarded([&] {
    const PairResult& p = ok_pair(report, pair_index);
    if (!p.gesture) throw Error(ErrorCode::not_computed, "gesture level was not evaluated");
    *out = copy_string(intervals_to_csv(p.gesture->intervals));
  });
}

pe_status pe_report_segments_csv(const pe_report* report, size_t pair_index, int which, char** out) {
  PE_REQUIRE(report && out && (which == 0 || which == 1), "invalid argument");
  return guarded([&] {
    const PairResult& p = ok_pair(report, pair_index);
    if (!p.action) throw Error(ErrorCode::not_computed, "action level was not evaluated");
    *out = copy_string(segments_to_csv(which == 0 ? p.action->reference_segments
                                                  : p.action->estimate_segments));
  });
}

void pe_report_free(pe_report* report) { delete report; }

pe_status pe_plot_data(const char* report_json, size_t len, const char* kind, long pair_index,
                       char** out) {
  PE_REQUIRE(report_json && kind && out, "null argument");
  return guarded([&] {
    *out = copy_string(emit_plot_data({report_json, len}, parse_plot_kind(kind), pair_index));
  });
}

// ---- synthetic curves -----------------------------------------------------

pe_status pe_synth_render(const char* script_json, size_t len, pe_curve** curve, char** annotations) {
  PE_REQUIRE(script_json && curve, "null argument");
  return guarded([&] {
    RenderedScript rendered = render_script(parse_script_json({script_json, len}));
    char* notes = annotations ? copy_string(annotations_to_json(rendered)) : nullptr;
    *curve = new pe_curve{std::move(rendered.curve)};
    if (annotations) *annotations = notes;
  });
}

pe_status pe_synth_random_script(uint64_t seed, size_t n_gestures, double frame_rate_hz,
                                 char** script_json) {
  PE_REQUIRE(script_json, "null argument");
  return guarded([&] {
    *script_json = copy_string(script_to_json(random_script(seed, n_gestures, frame_rate_hz)));
  });
}

}  // extern "C"
