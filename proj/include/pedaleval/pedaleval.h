/*
 * pedaleval C API.
 *
 * Every function returns a pe_status. On failure a message describing the
 * error is available from pe_last_error() on the calling thread until the
 * next call into the library from that thread. Objects are opaque handles
 * released with the matching *_free function; strings returned through
 * char** out-parameters are heap copies released with pe_string_free.
 */
#ifndef PEDALEVAL_PEDALEVAL_H
#define PEDALEVAL_PEDALEVAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef PEDALEVAL_BUILDING_LIBRARY
#    define PE_API __declspec(dllexport)
#  else
#    define PE_API __declspec(dllimport)
#  endif
#else
#  define PE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pe_status {
  PE_OK = 0,
  PE_ERR_INVALID_ARGUMENT = 1,
  PE_ERR_PARSE = 2,
  PE_ERR_EMPTY_INPUT = 3,
  PE_ERR_RANGE = 4,
  PE_ERR_SCHEMA = 5,
  PE_ERR_FORMAT = 6,
  PE_ERR_UNSUPPORTED_FORMAT = 7,
  PE_ERR_INSUFFICIENT_DATA = 8,
  PE_ERR_ALIGNMENT = 9,
  PE_ERR_RATE_MISMATCH = 10,
  PE_ERR_PARAMETER = 11,
  PE_ERR_SPEC = 12,
  PE_ERR_NOT_COMPUTED = 13,
  PE_ERR_IO = 14,
  PE_ERR_CONFIG = 15,
  PE_ERR_INTERNAL = 16
} pe_status;

/* Evaluation level bits; combine with |. */
#define PE_LEVEL_FRAME 0x1u
#define PE_LEVEL_ACTION 0x2u
#define PE_LEVEL_GESTURE 0x4u
#define PE_LEVEL_ALL 0x7u

/* Report serialization flags. */
#define PE_JSON_PRECISE 0x1u

typedef struct pe_curve pe_curve;
typedef struct pe_config pe_config;
typedef struct pe_report pe_report;

typedef struct pe_eval_options {
  unsigned levels;         /* PE_LEVEL_* bits; 0 means PE_LEVEL_ALL */
  int include_curves;      /* nonzero: keep both curves in the report */
  unsigned jobs;           /* worker threads for corpus runs; 0 means 1 */
} pe_eval_options;

PE_API const char* pe_version(void);
PE_API const char* pe_status_string(pe_status status);
PE_API const char* pe_last_error(void);
PE_API void pe_string_free(char* s);

/* ---- curves -------------------------------------------------------------- */

PE_API pe_status pe_curve_from_values(const double* values, size_t n, double frame_rate_hz,
                                      pe_curve** out);
PE_API pe_status pe_curve_from_csv(const char* text, size_t len, double frame_rate_hz,
                                   pe_curve** out);
PE_API pe_status pe_curve_from_json(const char* text, size_t len, pe_curve** out);
PE_API pe_status pe_curve_from_smf(const uint8_t* bytes, size_t len, double frame_rate_hz,
                                   pe_curve** out);
/* Dispatches on extension (.csv/.json/.mid/.midi) and brings the curve to
 * the config's io.frame_rate_hz. config may be NULL for defaults. */
PE_API pe_status pe_curve_load_file(const pe_config* config, const char* path, pe_curve** out);
PE_API void pe_curve_free(pe_curve* curve);

PE_API size_t pe_curve_length(const pe_curve* curve);
PE_API double pe_curve_frame_rate(const pe_curve* curve);
/* Copies min(capacity, length) values; returns the number copied. */
PE_API size_t pe_curve_copy_values(const pe_curve* curve, double* out, size_t capacity);

PE_API pe_status pe_curve_resample(const pe_curve* curve, double target_rate_hz, pe_curve** out);
PE_API pe_status pe_curve_perturb(const pe_curve* curve, double jitter_sigma, int shift_frames,
                                  uint64_t seed, pe_curve** out);
PE_API pe_status pe_curve_to_csv(const pe_curve* curve, char** out);
PE_API pe_status pe_curve_to_json(const pe_curve* curve, char** out);

/* `state,start_frame,end_frame` rows for the curve's action segments. */
PE_API pe_status pe_curve_action_segments_csv(const pe_config* config, const pe_curve* curve,
                                              char** out);
/* `category,start_frame,end_frame,max_depth,ratio` rows for the curve's gestures. */
PE_API pe_status pe_curve_gestures_csv(const pe_config* config, const pe_curve* curve, char** out);
/* JSON object mapping each gesture category to its share of frames. */
PE_API pe_status pe_curve_gesture_distribution(const pe_config* config, const pe_curve* curve,
                                               char** out);

/* ---- configuration ------------------------------------------------------- */

PE_API pe_status pe_config_create(pe_config** out);
PE_API pe_status pe_config_from_json(const char* text, size_t len, pe_config** out);
/* key is a dotted path such as "action.window_frames" (hyphens accepted). */
PE_API pe_status pe_config_set(pe_config* config, const char* key, const char* value);
PE_API pe_status pe_config_to_json(const pe_config* config, char** out);
/* Newline-separated list of every settable key. */
PE_API pe_status pe_config_keys(char** out);
PE_API void pe_config_free(pe_config* config);

/* ---- evaluation ---------------------------------------------------------- */

/* Evaluates two curves that already share a frame rate; lengths are
 * reconciled by the config's io.align_policy. */
PE_API pe_status pe_evaluate_curves(const pe_config* config, const pe_curve* reference,
                                    const pe_curve* estimate, const pe_eval_options* options,
                                    pe_report** out);
/* One pair of files. A load or alignment failure is recorded in the report
 * (see pe_report_failed_count) and the call still returns PE_OK. */
PE_API pe_status pe_evaluate_files(const pe_config* config, const char* reference_path,
                                   const char* estimate_path, const pe_eval_options* options,
                                   pe_report** out);
/* Manifest CSV with header `reference,estimate`; relative paths resolve
 * against the manifest's directory. */
PE_API pe_status pe_evaluate_manifest(const pe_config* config, const char* manifest_path,
                                      const pe_eval_options* options, pe_report** out);

PE_API size_t pe_report_pair_count(const pe_report* report);
PE_API size_t pe_report_failed_count(const pe_report* report);
/* flags: PE_JSON_* bits. timestamp may be NULL to omit it. */
PE_API pe_status pe_report_to_json(const pe_report* report, unsigned flags, const char* timestamp,
                                   char** out);
/* `category,start,end,five_point_mse,fourier_mse` rows for one pair. */
PE_API pe_status pe_report_intervals_csv(const pe_report* report, size_t pair_index, char** out);
/* Action segments of one pair's reference (which == 0) or estimate (1). */
PE_API pe_status pe_report_segments_csv(const pe_report* report, size_t pair_index, int which,
                                        char** out);
PE_API void pe_report_free(pe_report* report);

/* kind: "distribution_bars", "curve_overlay" or "segment_timeline".
 * pair_index < 0 selects the corpus aggregate for distribution_bars. */
PE_API pe_status pe_plot_data(const char* report_json, size_t len, const char* kind,
                              long pair_index, char** out);

/* ---- synthetic curves ---------------------------------------------------- */

/* Renders a script document; annotations (may be NULL) receives the
 * ground-truth interval JSON. */
PE_API pe_status pe_synth_render(const char* script_json, size_t len, pe_curve** curve,
                                 char** annotations);
PE_API pe_status pe_synth_random_script(uint64_t seed, size_t n_gestures, double frame_rate_hz,
                                        char** script_json);

#ifdef __cplusplus
}
#endif

#endif /* PEDALEVAL_PEDALEVAL_H */
