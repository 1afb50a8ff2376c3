#include "pedaleval/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "pedaleval/error.hpp"

namespace pedaleval {

using nlohmann::json;

namespace {

enum class Kind { real, count, policy };

struct Key {
  const char* path;
  Kind kind;
};

constexpr Key kKeys[] = {
    {"frame.binary_threshold", Kind::real},
    {"action.window_frames", Kind::count},
    {"action.slope_threshold", Kind::real},
    {"action.r2_min", Kind::real},
    {"gesture.epsilon", Kind::real},
    {"gesture.theta", Kind::real},
    {"gesture.ratio_split", Kind::real},
    {"gesture.duration_threshold_frames", Kind::count},
    {"shape.fourier_k", Kind::count},
    {"io.frame_rate_hz", Kind::real},
    {"io.csv_rate_hz", Kind::real},
    {"io.align_policy", Kind::policy},
};

double* real_slot(EvalConfig& c, std::string_view path) {
  if (path == "frame.binary_threshold") return &c.frame.binary_threshold;
  if (path == "action.slope_threshold") return &c.action.slope_threshold;
  if (path == "action.r2_min") return &c.action.r2_min;
  if (path == "gesture.epsilon") return &c.gesture.epsilon;
  if (path == "gesture.theta") return &c.gesture.theta;
  if (path == "gesture.ratio_split") return &c.gesture.ratio_split;
  if (path == "io.frame_rate_hz") return &c.io.frame_rate_hz;
  if (path == "io.csv_rate_hz") return &c.io.csv_rate_hz;
  return nullptr;
}

void set_count(EvalConfig& c, std::string_view path, long long v) {
  if (v <= 0) throw Error(ErrorCode::config, std::string(path) + ": must be a positive integer");
  if (path == "action.window_frames") c.action.window_frames = static_cast<int>(v);
  if (path == "gesture.duration_threshold_frames") c.gesture.duration_threshold_frames = static_cast<std::size_t>(v);
  if (path == "shape.fourier_k") c.shape.fourier_k = static_cast<std::size_t>(v);
}

const Key* find_key(std::string_view path) {
  for (const Key& k : kKeys) {
    if (path == k.path) return &k;
  }
  return nullptr;
}

std::string normalize(std::string_view path) {
  std::string out(path);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

void set_from_json(EvalConfig& c, const std::string& path, const json& v) {
  const Key* key = find_key(path);
  if (!key) throw Error(ErrorCode::config, "unknown config key '" + path + "'");
  switch (key->kind) {
    case Kind::real:
      if (!v.is_number()) throw Error(ErrorCode::config, path + ": expected a number");
      *real_slot(c, path) = v.get<double>();
      break;
    case Kind::count:
      if (!v.is_number_integer()) throw Error(ErrorCode::config, path + ": expected an integer");
      set_count(c, path, v.get<long long>());
      break;
    case Kind::policy:
      if (!v.is_string()) throw Error(ErrorCode::config, path + ": expected a string");
      c.io.align_policy = parse_align_policy(v.get<std::string>());
      break;
  }
}

}  // namespace

void EvalConfig::validate() const {
  if (!(frame.binary_threshold > 0.0 && frame.binary_threshold < 1.0)) {
    throw Error(ErrorCode::config, "frame.binary_threshold must lie in (0,1)");
  }
  action.validate();
  gesture.validate();
  shape.validate();
  if (!(io.frame_rate_hz > 0.0) || !std::isfinite(io.frame_rate_hz)) {
    throw Error(ErrorCode::config, "io.frame_rate_hz must be positive");
  }
  if (!(io.csv_rate_hz > 0.0) || !std::isfinite(io.csv_rate_hz)) {
    throw Error(ErrorCode::config, "io.csv_rate_hz must be positive");
  }
}

void EvalConfig::set(std::string_view raw_path, std::string_view value) {
  const std::string path = normalize(raw_path);
  const Key* key = find_key(path);
  if (!key) throw Error(ErrorCode::config, "unknown config key '" + path + "'");
  EvalConfig next = *this;
  if (key->kind == Kind::policy) {
    next.io.align_policy = parse_align_policy(std::string(value));
  } else {
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      throw Error(ErrorCode::config, path + ": '" + std::string(value) + "' is not a number");
    }
    set_from_json(next, path, parsed);
  }
  next.validate();
  *this = next;
}

std::vector<std::string> EvalConfig::keys() {
  std::vector<std::string> out;
  for (const Key& k : kKeys) out.emplace_back(k.path);
  return out;
}

bool operator==(const EvalConfig& a, const EvalConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

EvalConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config, std::string("invalid config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");
  EvalConfig config;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw Error(ErrorCode::config, section + ": expected an object");
    if (section != "frame" && section != "action" && section != "gesture" && section != "shape" &&
        section != "io") {
      throw Error(ErrorCode::config, "unknown config section '" + section + "'");
    }
    for (const auto& [name, value] : body.items()) set_from_json(config, section + "." + name, value);
  }
  config.validate();
  return config;
}

std::string config_to_json(const EvalConfig& c) {
  const json doc = {
      {"frame", {{"binary_threshold", c.frame.binary_threshold}}},
      {"action",
       {{"window_frames", c.action.window_frames},
        {"slope_threshold", c.action.slope_threshold},
        {"r2_min", c.action.r2_min}}},
      {"gesture",
       {{"epsilon", c.gesture.epsilon},
        {"theta", c.gesture.theta},
        {"ratio_split", c.gesture.ratio_split},
        {"duration_threshold_frames", c.gesture.duration_threshold_frames}}},
      {"shape", {{"fourier_k", c.shape.fourier_k}}},
      {"io",
       {{"frame_rate_hz", c.io.frame_rate_hz},
        {"csv_rate_hz", c.io.csv_rate_hz},
        {"align_policy", to_string(c.io.align_policy)}}},
  };
  return doc.dump(2);
}

}  // namespace pedaleval
