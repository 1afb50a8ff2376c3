#include "pedaleval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "pedaleval/error.hpp"

namespace pedaleval {

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SeededRng::integer(std::uint64_t lo, std::uint64_t hi) {
  return lo + engine_() % (hi - lo + 1);
}

double SeededRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

GestureSpec GestureSpec::defaults(GestureCategory category) {
  GestureSpec s;
  s.category = category;
  switch (category) {
    case GestureCategory::pinnacle:
      s.duration_frames = 40;
      s.peak_depth = 0.9;
      break;
    case GestureCategory::hill:
      s.duration_frames = 60;
      s.peak_depth = 0.6;
      s.attack_fraction = 0.25;
      s.release_fraction = 0.25;
      break;
    case GestureCategory::highland:
      break;
    case GestureCategory::mountain:
      s.duration_frames = 300;
      s.oscillation_amplitude = 0.85;
      s.oscillation_period = 25.0;
      break;
    case GestureCategory::plain:
      throw Error(ErrorCode::spec, "plain is not a gesture category");
  }
  return s;
}

namespace {

[[noreturn]] void spec_error(const GestureSpec& spec, const std::string& what) {
  throw Error(ErrorCode::spec, to_string(spec.category) + " spec: " + what);
}

void check_spec(const GestureSpec& spec) {
  const GestureConfig defaults;
  const bool long_category = spec.category == GestureCategory::highland ||
                             spec.category == GestureCategory::mountain;
  if (spec.category == GestureCategory::plain) spec_error(spec, "plain is not a gesture");
  if (spec.duration_frames == 0) spec_error(spec, "duration must be positive");
  if (long_category && spec.duration_frames < defaults.duration_threshold_frames) {
    spec_error(spec, "duration must be >= " + std::to_string(defaults.duration_threshold_frames));
  }
  if (!long_category && spec.duration_frames >= defaults.duration_threshold_frames) {
    spec_error(spec, "duration must be < " + std::to_string(defaults.duration_threshold_frames));
  }
  if (!(spec.peak_depth > kGestureFloorDepth && spec.peak_depth <= 1.0)) {
    spec_error(spec, "peak_depth must lie in (0.06, 1]");
  }
  const auto in_open_unit = [](double f) { return f > 0.0 && f < 1.0; };
  if (!in_open_unit(spec.attack_fraction) || !in_open_unit(spec.release_fraction)) {
    spec_error(spec, "attack and release fractions must lie in (0,1)");
  }
  if (spec.attack_fraction + spec.release_fraction >= 1.0) {
    spec_error(spec, "attack_fraction + release_fraction must be < 1");
  }
  if (spec.category == GestureCategory::mountain) {
    if (!(spec.oscillation_amplitude > 0.0 && spec.oscillation_amplitude <= 1.0)) {
      spec_error(spec, "oscillation_amplitude must lie in (0,1]");
    }
    if (!(spec.oscillation_period >= 2.0)) spec_error(spec, "oscillation_period must be >= 2 frames");
  }
}

// Normalized contour in [0,1]; depth = floor + (peak - floor) * shape.
std::vector<double> contour(const GestureSpec& spec) {
  const std::size_t d = spec.duration_frames;
  if (d <= 2) return std::vector<double>(d, 1.0);

  const auto frames = [d](double fraction) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(d))));
  };
  const std::size_t attack = frames(spec.attack_fraction);
  const std::size_t release = frames(spec.release_fraction);
  if (attack + release >= d) spec_error(spec, "attack and release leave no room for a peak");
  const std::size_t middle = d - attack - release;

  std::vector<double> s(d);
  for (std::size_t j = 0; j < attack; ++j) {
    s[j] = static_cast<double>(j + 1) / static_cast<double>(attack + 1);
  }
  for (std::size_t k = 0; k < release; ++k) {
    s[d - 1 - k] = static_cast<double>(k + 1) / static_cast<double>(release + 1);
  }

  SeededRng rng(spec.seed);
  const std::size_t m0 = attack;
  switch (spec.category) {
    case GestureCategory::pinnacle:
    case GestureCategory::highland:
      std::fill(s.begin() + static_cast<std::ptrdiff_t>(m0),
                s.begin() + static_cast<std::ptrdiff_t>(m0 + middle), 1.0);
      break;
    case GestureCategory::hill: {
      // Peak, then a cosine ease down to a half-pedal shoulder before release.
      const double shoulder = rng.uniform(0.2, 0.4);
      for (std::size_t m = 0; m < middle; ++m) {
        const double u = middle == 1 ? 0.0 : static_cast<double>(m) / static_cast<double>(middle - 1);
        s[m0 + m] = shoulder + (1.0 - shoulder) * 0.5 * (1.0 + std::cos(std::numbers::pi * u));
      }
      break;
    }
    case GestureCategory::mountain: {
      // Oscillation starts at the crest; each cycle's depth varies by up to 10%.
      const double period = spec.oscillation_period;
      std::vector<double> cycle_amp;
      for (std::size_t m = 0; m < middle; ++m) {
        const auto cycle = static_cast<std::size_t>(static_cast<double>(m) / period);
        while (cycle_amp.size() <= cycle) {
          cycle_amp.push_back(spec.oscillation_amplitude * (1.0 - 0.1 * rng.uniform()));
        }
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(m) / period;
        s[m0 + m] = 1.0 - cycle_amp[cycle] * 0.5 * (1.0 - std::cos(phase));
      }
      break;
    }
    case GestureCategory::plain:
      break;
  }
  return s;
}

}  // namespace

std::vector<double> gen_gesture(const GestureSpec& spec) {
  check_spec(spec);
  std::vector<double> values = contour(spec);
  for (double& v : values) {
    v = std::clamp(kGestureFloorDepth + (spec.peak_depth - kGestureFloorDepth) * v, 0.0, 1.0);
  }

  const GestureConfig defaults;
  const double ratio = max_depth_ratio(values, defaults.theta);
  const GestureCategory got = classify_gesture(values.size(), ratio, defaults);
  if (got != spec.category) {
    spec_error(spec, "parameters produce a " + to_string(got) + " (max-depth ratio " +
                         std::to_string(ratio) + ")");
  }
  return values;
}

GestureSpec random_gesture_spec(GestureCategory category, std::uint64_t seed) {
  SeededRng rng(seed);
  GestureSpec s = GestureSpec::defaults(category);
  s.seed = seed;
  switch (category) {
    case GestureCategory::pinnacle:
      s.duration_frames = rng.integer(15, 99);
      s.peak_depth = rng.uniform(0.2, 1.0);
      s.attack_fraction = rng.uniform(0.04, 0.12);
      s.release_fraction = rng.uniform(0.04, 0.12);
      break;
    case GestureCategory::hill:
      s.duration_frames = rng.integer(20, 99);
      s.peak_depth = rng.uniform(0.3, 1.0);
      s.attack_fraction = rng.uniform(0.2, 0.3);
      s.release_fraction = rng.uniform(0.2, 0.3);
      break;
    case GestureCategory::highland:
      s.duration_frames = rng.integer(100, 600);
      s.peak_depth = rng.uniform(0.2, 1.0);
      s.attack_fraction = rng.uniform(0.04, 0.15);
      s.release_fraction = rng.uniform(0.04, 0.15);
      break;
    case GestureCategory::mountain:
      s.duration_frames = rng.integer(100, 600);
      s.peak_depth = rng.uniform(0.3, 1.0);
      s.attack_fraction = rng.uniform(0.04, 0.15);
      s.release_fraction = rng.uniform(0.04, 0.15);
      s.oscillation_amplitude = rng.uniform(0.8, 0.95);
      s.oscillation_period = rng.uniform(10.0, 40.0);
      break;
    case GestureCategory::plain:
      throw Error(ErrorCode::spec, "plain is not a gesture category");
  }
  return s;
}

std::vector<double> perturb(std::span<const double> values, double jitter_sigma, int shift_frames,
                            std::uint64_t seed) {
  const auto n = static_cast<long long>(values.size());
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw Error(ErrorCode::parameter, "jitter sigma must be a non-negative finite number");
  }
  if (std::llabs(shift_frames) >= n) {
    throw Error(ErrorCode::parameter, "|shift| must be smaller than the sequence length");
  }
  std::vector<double> out(values.size());
  for (long long i = 0; i < n; ++i) {
    const long long src = std::clamp(i - shift_frames, 0LL, n - 1);
    out[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(src)];
  }
  if (jitter_sigma > 0.0) {
    SeededRng rng(seed);
    for (double& v : out) v = std::clamp(v + jitter_sigma * rng.normal(), 0.0, 1.0);
  }
  return out;
}

RenderedScript render_script(const CurveScript& script) {
  std::vector<double> values;
  std::vector<CategorizedInterval> intervals;
  bool previous_was_gesture = false;
  for (const ScriptItem& item : script.items) {
    const std::size_t start = values.size();
    if (const auto* gap = std::get_if<PlainGap>(&item)) {
      if (gap->frames == 0) throw Error(ErrorCode::spec, "plain gaps must be at least one frame");
      values.insert(values.end(), gap->frames, 0.0);
      if (!intervals.empty() && intervals.back().category == GestureCategory::plain) {
        intervals.back().frames.end = values.size() - 1;
      } else {
        intervals.push_back({GestureCategory::plain, {start, values.size() - 1}});
      }
      previous_was_gesture = false;
      continue;
    }
    const GestureSpec& spec = std::get<GestureSpec>(item);
    if (previous_was_gesture) {
      throw Error(ErrorCode::spec, "adjacent gestures need a plain gap between them");
    }
    const std::vector<double> g = gen_gesture(spec);
    values.insert(values.end(), g.begin(), g.end());
    intervals.push_back({spec.category, {start, values.size() - 1}});
    previous_was_gesture = true;
  }
  if (values.empty()) throw Error(ErrorCode::empty_input, "script renders no frames");

  std::vector<GestureCategory> frame_categories(values.size());
  for (const CategorizedInterval& iv : intervals) {
    std::fill(frame_categories.begin() + static_cast<std::ptrdiff_t>(iv.frames.start),
              frame_categories.begin() + static_cast<std::ptrdiff_t>(iv.frames.end) + 1, iv.category);
  }
  return {PedalCurve(script.frame_rate_hz, std::move(values), "synth"), std::move(intervals),
          std::move(frame_categories)};
}

CurveScript random_script(std::uint64_t seed, std::size_t n_gestures, double frame_rate_hz) {
  SeededRng rng(seed);
  CurveScript script;
  script.frame_rate_hz = frame_rate_hz;
  constexpr std::array<GestureCategory, 4> kShapes = {GestureCategory::pinnacle, GestureCategory::hill,
                                                      GestureCategory::highland, GestureCategory::mountain};
  for (std::size_t i = 0; i < n_gestures; ++i) {
    script.items.emplace_back(PlainGap{rng.integer(5, 80)});
    const GestureCategory c = kShapes[rng.integer(0, 3)];
    script.items.emplace_back(random_gesture_spec(c, rng.integer(0, UINT32_MAX)));
  }
  script.items.emplace_back(PlainGap{rng.integer(5, 80)});
  return script;
}

namespace {

using nlohmann::json;

template <typename T>
T field_or(const json& obj, const char* key, T fallback, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw Error(ErrorCode::schema, path + "." + key + ": expected a number");
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      throw Error(ErrorCode::schema, path + "." + key + ": expected a non-negative integer");
    }
  }
  return it->get<T>();
}

}  // namespace

CurveScript parse_script_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("invalid script JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::schema, "script must be a JSON object");
  CurveScript script;
  script.frame_rate_hz = field_or(doc, "frame_rate_hz", kDefaultFrameRateHz, "script");
  const auto items = doc.find("items");
  if (items == doc.end() || !items->is_array()) throw Error(ErrorCode::schema, "items: expected an array");
  for (std::size_t i = 0; i < items->size(); ++i) {
    const json& item = (*items)[i];
    const std::string path = "items[" + std::to_string(i) + "]";
    if (!item.is_object()) throw Error(ErrorCode::schema, path + ": expected an object");
    if (item.contains("gap")) {
      script.items.emplace_back(PlainGap{field_or<std::size_t>(item, "gap", 0, path)});
      continue;
    }
    const auto g = item.find("gesture");
    if (g == item.end() || !g->is_object()) {
      throw Error(ErrorCode::schema, path + ": expected a 'gap' or 'gesture' entry");
    }
    const std::string gpath = path + ".gesture";
    const auto cat = g->find("category");
    if (cat == g->end() || !cat->is_string()) throw Error(ErrorCode::schema, gpath + ".category missing");
    GestureSpec s = GestureSpec::defaults(parse_gesture_category(cat->get<std::string>()));
    s.duration_frames = field_or(*g, "duration_frames", s.duration_frames, gpath);
    s.peak_depth = field_or(*g, "peak_depth", s.peak_depth, gpath);
    s.attack_fraction = field_or(*g, "attack_fraction", s.attack_fraction, gpath);
    s.release_fraction = field_or(*g, "release_fraction", s.release_fraction, gpath);
    s.oscillation_amplitude = field_or(*g, "oscillation_amplitude", s.oscillation_amplitude, gpath);
    s.oscillation_period = field_or(*g, "oscillation_period", s.oscillation_period, gpath);
    s.seed = field_or(*g, "seed", s.seed, gpath);
    script.items.emplace_back(s);
  }
  return script;
}

std::string script_to_json(const CurveScript& script) {
  json items = json::array();
  for (const ScriptItem& item : script.items) {
    if (const auto* gap = std::get_if<PlainGap>(&item)) {
      items.push_back({{"gap", gap->frames}});
      continue;
    }
    const GestureSpec& s = std::get<GestureSpec>(item);
    json g = {{"category", to_string(s.category)},
              {"duration_frames", s.duration_frames},
              {"peak_depth", s.peak_depth},
              {"attack_fraction", s.attack_fraction},
              {"release_fraction", s.release_fraction},
              {"seed", s.seed}};
    if (s.category == GestureCategory::mountain) {
      g["oscillation_amplitude"] = s.oscillation_amplitude;
      g["oscillation_period"] = s.oscillation_period;
    }
    items.push_back({{"gesture", g}});
  }
  return json{{"frame_rate_hz", script.frame_rate_hz}, {"items", items}}.dump(2);
}

std::string annotations_to_json(const RenderedScript& rendered) {
  json intervals = json::array();
  for (const CategorizedInterval& iv : rendered.intervals) {
    intervals.push_back(
        {{"category", to_string(iv.category)}, {"start", iv.frames.start}, {"end", iv.frames.end}});
  }
  return json{{"frame_rate_hz", rendered.curve.frame_rate_hz()},
              {"length", rendered.curve.size()},
              {"intervals", intervals}}
      .dump(2);
}

}  // namespace pedaleval
