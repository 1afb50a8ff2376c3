// pedaleval command-line front end. Everything goes through the C API.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedaleval/pedaleval.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct CurveDeleter {
  void operator()(pe_curve* c) const { pe_curve_free(c); }
};
struct ConfigDeleter {
  void operator()(pe_config* c) const { pe_config_free(c); }
};
struct ReportDeleter {
  void operator()(pe_report* r) const { pe_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { pe_string_free(s); }
};

using CurvePtr = std::unique_ptr<pe_curve, CurveDeleter>;
using ConfigPtr = std::unique_ptr<pe_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<pe_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

/// Thrown for any failed C API call; carries the exit status to use.
struct CliError {
  int exit_code;
  std::string message;
};

void check(pe_status status, const std::string& context, int exit_code = kExitFailed) {
  if (status == PE_OK) return;
  if (status == PE_ERR_CONFIG) exit_code = kExitUsage;
  throw CliError{exit_code, context + ": " + pe_status_string(status) + ": " + pe_last_error()};
}

std::string take(char* s) {
  StringPtr owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

std::string read_file(const std::string& path, int exit_code = kExitFailed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{exit_code, "cannot open " + path};
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitFailed, "cannot write " + path};
  out << text;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> config_keys() {
  char* raw = nullptr;
  check(pe_config_keys(&raw), "config keys");
  std::vector<std::string> keys;
  std::istringstream in(take(raw));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) keys.push_back(line);
  }
  return keys;
}

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

/// Config file plus per-key flag overrides shared by the evaluating subcommands.
struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    for (const std::string& key : keys) {
      app->add_option_function<std::string>(
             flag_name(key), [this, key](const std::string& v) { overrides[key] = v; },
             "override " + key)
          ->group("Config overrides");
    }
  }

  ConfigPtr build() const {
    pe_config* raw = nullptr;
    if (config_path.empty()) {
      check(pe_config_create(&raw), "config", kExitUsage);
    } else {
      const std::string text = read_file(config_path, kExitUsage);
      check(pe_config_from_json(text.data(), text.size(), &raw), config_path, kExitUsage);
    }
    ConfigPtr config(raw);
    for (const auto& [key, value] : overrides) {
      check(pe_config_set(config.get(), key.c_str(), value.c_str()), flag_name(key), kExitUsage);
    }
    return config;
  }
};

struct ReportOptions {
  std::string output;
  bool precise = false;
  bool timestamp = false;
  bool include_curves = false;
  unsigned jobs = 1;

  void attach(CLI::App* app) {
    app->add_option("-o,--output", output, "report file (default stdout)");
    app->add_flag("--precise", precise, "full-precision floats instead of 6 significant digits");
    app->add_flag("--timestamp", timestamp, "record the UTC run time in provenance");
    app->add_flag("--include-curves", include_curves, "embed both curves (for curve_overlay plots)");
    app->add_option("-j,--jobs", jobs, "worker threads for manifest runs")->check(CLI::PositiveNumber);
  }
};

int emit_report(const pe_report* report, const ReportOptions& options) {
  char* json = nullptr;
  const std::string stamp = options.timestamp ? utc_now() : std::string();
  check(pe_report_to_json(report, options.precise ? PE_JSON_PRECISE : 0u,
                          options.timestamp ? stamp.c_str() : nullptr, &json),
        "report");
  write_output(options.output, take(json));

  const size_t failed = pe_report_failed_count(report);
  if (failed > 0) {
    std::cerr << "pedaleval: " << failed << " of " << pe_report_pair_count(report)
              << " pair(s) failed; see the report's pairs[].error\n";
    return kExitFailed;
  }
  return kExitOk;
}

ReportPtr evaluate_files(const pe_config* config, const std::string& reference,
                         const std::string& estimate, unsigned levels, const ReportOptions& ro) {
  const pe_eval_options options{levels, ro.include_curves ? 1 : 0, ro.jobs};
  pe_report* raw = nullptr;
  check(pe_evaluate_files(config, reference.c_str(), estimate.c_str(), &options, &raw), "evaluate");
  return ReportPtr(raw);
}

struct PairArgs {
  std::string reference;
  std::string estimate;

  void attach(CLI::App* app, bool required) {
    auto* r = app->add_option("reference", reference, "ground-truth curve (.csv/.json/.mid)");
    auto* e = app->add_option("estimate", estimate, "estimated curve (.csv/.json/.mid)");
    if (required) {
      r->required();
      e->required();
    }
  }
};

void write_if(const std::string& path, const std::string& text) {
  if (!path.empty()) write_output(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame, action and gesture level evaluation of sustain-pedal depth curves"};
  app.set_version_flag("--version", pe_version());
  app.require_subcommand(1);

  std::vector<std::string> keys;
  try {
    keys = config_keys();
  } catch (const CliError& e) {
    std::cerr << "pedaleval: " << e.message << "\n";
    return kExitFailed;
  }

  // frames / actions / gestures
  struct LevelCommand {
    CLI::App* app;
    unsigned level;
    PairArgs pair;
    ConfigOptions config;
    ReportOptions report;
  };
  std::vector<std::unique_ptr<LevelCommand>> level_commands;
  auto add_level = [&](const char* name, const char* help, unsigned level) {
    auto cmd = std::make_unique<LevelCommand>();
    cmd->app = app.add_subcommand(name, help);
    cmd->level = level;
    cmd->pair.attach(cmd->app, true);
    cmd->config.attach(cmd->app, keys);
    cmd->report.attach(cmd->app);
    level_commands.push_back(std::move(cmd));
    return level_commands.back().get();
  };
  add_level("frames", "binary/4-class P/R/F1 and MSE/MAE", PE_LEVEL_FRAME);
  LevelCommand* actions = add_level("actions", "press/hold/release action metrics", PE_LEVEL_ACTION);
  LevelCommand* gestures = add_level("gestures", "gesture taxonomy and contour similarity", PE_LEVEL_GESTURE);

  std::string ref_segments_csv, est_segments_csv;
  actions->app->add_option("--reference-segments", ref_segments_csv, "write reference action segments CSV");
  actions->app->add_option("--estimate-segments", est_segments_csv, "write estimate action segments CSV");
  std::string intervals_csv, ref_gestures_csv;
  gestures->app->add_option("--intervals-csv", intervals_csv, "write per-interval scores CSV");
  gestures->app->add_option("--reference-gestures", ref_gestures_csv, "write reference gesture list CSV");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "all three levels over a pair or a manifest");
  PairArgs eval_pair;
  eval_pair.attach(eval_cmd, false);
  std::string manifest;
  eval_cmd->add_option("-m,--manifest", manifest, "CSV manifest with header reference,estimate")
      ->check(CLI::ExistingFile);
  ConfigOptions eval_config;
  eval_config.attach(eval_cmd, keys);
  ReportOptions eval_report;
  eval_report.attach(eval_cmd);

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "CC64 sustain curve from a Standard MIDI File");
  std::string midi_path, extract_out, extract_format = "csv";
  double extract_rate = 100.0;
  extract_cmd->add_option("input", midi_path, "MIDI file")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("-o,--output", extract_out, "output file (default stdout)");
  extract_cmd->add_option("--rate", extract_rate, "frame rate in Hz")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--format", extract_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic pedal curve with annotations");
  std::string script_path, synth_out, annotations_out, script_out;
  std::size_t random_gestures = 0;
  std::uint64_t synth_seed = 1, perturb_seed = 1;
  double synth_rate = 100.0, jitter = 0.0;
  int shift = 0;
  auto* script_opt = synth_cmd->add_option("--script", script_path, "script JSON")->check(CLI::ExistingFile);
  synth_cmd->add_option("--random", random_gestures, "number of random gestures")->excludes(script_opt);
  synth_cmd->add_option("--seed", synth_seed, "seed for --random");
  synth_cmd->add_option("--rate", synth_rate, "frame rate for --random")->check(CLI::PositiveNumber);
  synth_cmd->add_option("-o,--output", synth_out, "curve file; .json or .csv")->required();
  synth_cmd->add_option("--annotations", annotations_out, "ground-truth interval JSON");
  synth_cmd->add_option("--write-script", script_out, "save the script that was rendered");
  synth_cmd->add_option("--jitter", jitter, "Gaussian jitter sigma applied after rendering");
  synth_cmd->add_option("--shift", shift, "frame shift applied after rendering");
  synth_cmd->add_option("--perturb-seed", perturb_seed, "seed for --jitter");

  // plot-data
  auto* plot_cmd = app.add_subcommand("plot-data", "series data for external plotting");
  std::string plot_report, plot_kind, plot_out;
  long plot_pair = -1;
  plot_cmd->add_option("--report", plot_report, "report JSON")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--kind", plot_kind, "plot kind")
      ->required()
      ->check(CLI::IsMember({"distribution_bars", "curve_overlay", "segment_timeline"}));
  plot_cmd->add_option("--pair", plot_pair, "pair index (default: aggregate / first pair)");
  plot_cmd->add_option("-o,--output", plot_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& cmd : level_commands) {
      if (!cmd->app->parsed()) continue;
      ConfigPtr config = cmd->config.build();
      ReportPtr report = evaluate_files(config.get(), cmd->pair.reference, cmd->pair.estimate,
                                        cmd->level, cmd->report);
      const int status = emit_report(report.get(), cmd->report);
      if (status == kExitOk && cmd.get() == actions) {
        char* csv = nullptr;
        if (!ref_segments_csv.empty()) {
          check(pe_report_segments_csv(report.get(), 0, 0, &csv), "segments");
          write_if(ref_segments_csv, take(csv));
        }
        if (!est_segments_csv.empty()) {
          check(pe_report_segments_csv(report.get(), 0, 1, &csv), "segments");
          write_if(est_segments_csv, take(csv));
        }
      }
      if (status == kExitOk && cmd.get() == gestures) {
        char* csv = nullptr;
        if (!intervals_csv.empty()) {
          check(pe_report_intervals_csv(report.get(), 0, &csv), "intervals");
          write_if(intervals_csv, take(csv));
        }
        if (!ref_gestures_csv.empty()) {
          pe_curve* raw = nullptr;
          check(pe_curve_load_file(config.get(), cmd->pair.reference.c_str(), &raw), cmd->pair.reference);
          CurvePtr curve(raw);
          check(pe_curve_gestures_csv(config.get(), curve.get(), &csv), "gestures");
          write_if(ref_gestures_csv, take(csv));
        }
      }
      return status;
    }

    if (eval_cmd->parsed()) {
      const bool have_pair = !eval_pair.reference.empty() || !eval_pair.estimate.empty();
      if (have_pair == !manifest.empty() ||
          (have_pair && (eval_pair.reference.empty() || eval_pair.estimate.empty()))) {
        std::cerr << "pedaleval eval: give either REFERENCE ESTIMATE or --manifest\n";
        return kExitUsage;
      }
      ConfigPtr config = eval_config.build();
      ReportPtr report;
      if (have_pair) {
        report = evaluate_files(config.get(), eval_pair.reference, eval_pair.estimate, PE_LEVEL_ALL,
                                eval_report);
      } else {
        const pe_eval_options options{PE_LEVEL_ALL, eval_report.include_curves ? 1 : 0, eval_report.jobs};
        pe_report* raw = nullptr;
        check(pe_evaluate_manifest(config.get(), manifest.c_str(), &options, &raw), manifest, kExitUsage);
        report.reset(raw);
      }
      return emit_report(report.get(), eval_report);
    }

    if (extract_cmd->parsed()) {
      const std::string bytes = read_file(midi_path);
      pe_curve* raw = nullptr;
      check(pe_curve_from_smf(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size(),
                              extract_rate, &raw),
            midi_path);
      CurvePtr curve(raw);
      char* text = nullptr;
      check(extract_format == "json" ? pe_curve_to_json(curve.get(), &text)
                                     : pe_curve_to_csv(curve.get(), &text),
            "serialize");
      write_output(extract_out, take(text) + (extract_format == "json" ? "\n" : ""));
      return kExitOk;
    }

    if (synth_cmd->parsed()) {
      std::string script;
      if (!script_path.empty()) {
        script = read_file(script_path, kExitUsage);
      } else if (random_gestures > 0) {
        char* text = nullptr;
        check(pe_synth_random_script(synth_seed, random_gestures, synth_rate, &text), "random script");
        script = take(text);
      } else {
        std::cerr << "pedaleval synth: give --script or --random N\n";
        return kExitUsage;
      }
      pe_curve* raw = nullptr;
      char* notes = nullptr;
      check(pe_synth_render(script.data(), script.size(), &raw, &notes), "synth");
      CurvePtr curve(raw);
      const std::string annotations = take(notes);
      if (jitter != 0.0 || shift != 0) {
        pe_curve* moved = nullptr;
        check(pe_curve_perturb(curve.get(), jitter, shift, perturb_seed, &moved), "perturb");
        curve.reset(moved);
      }
      const bool as_json = synth_out.size() >= 5 && synth_out.substr(synth_out.size() - 5) == ".json";
      char* text = nullptr;
      check(as_json ? pe_curve_to_json(curve.get(), &text) : pe_curve_to_csv(curve.get(), &text),
            "serialize");
      write_output(synth_out, take(text) + (as_json ? "\n" : ""));
      write_if(annotations_out, annotations + "\n");
      write_if(script_out, script + "\n");
      return kExitOk;
    }

    if (plot_cmd->parsed()) {
      const std::string report = read_file(plot_report, kExitUsage);
      char* out = nullptr;
      check(pe_plot_data(report.data(), report.size(), plot_kind.c_str(), plot_pair, &out), "plot-data");
      write_output(plot_out, take(out));
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "pedaleval: " << e.message << "\n";
    return e.exit_code;
  }
  return kExitUsage;
}
