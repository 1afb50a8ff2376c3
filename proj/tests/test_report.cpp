#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pedaleval/config.hpp"
#include "pedaleval/curve_io.hpp"
#include "pedaleval/report.hpp"
#include "pedaleval/synth.hpp"
#include "support/helpers.hpp"

using namespace pedaleval;
using namespace pedaleval::testing;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

PedalCurve rendered(std::uint64_t seed, std::size_t n) { return render_script(random_script(seed, n)).curve; }

}  // namespace

TEST_CASE("config defaults and overrides") {
  EvalConfig c;
  CHECK(c.action.window_frames == 19);
  CHECK(c.action.slope_threshold == 0.005);
  CHECK(c.action.r2_min == 0.5);
  CHECK(c.gesture.theta == 0.65);
  CHECK(c.gesture.duration_threshold_frames == 100);
  CHECK(c.shape.fourier_k == 11);
  c.set("action.window-frames", "21");
  CHECK(c.action.window_frames == 21);
  c.set("io.align_policy", "strict");
  CHECK(c.io.align_policy == AlignPolicy::strict);
  CHECK(error_code([&] { c.set("action.window_frames", "20"); }) == ErrorCode::config);
  CHECK(error_code([&] { c.set("action.nope", "1"); }) == ErrorCode::config);
  CHECK(error_code([&] { c.set("gesture.theta", "x"); }) == ErrorCode::config);
  CHECK(EvalConfig::keys().size() == 12);
}

TEST_CASE("config json round trip") {
  EvalConfig c;
  c.set("gesture.epsilon", "0.07");
  c.set("shape.fourier_k", "9");
  CHECK(parse_config_json(config_to_json(c)) == c);
  const EvalConfig partial = parse_config_json(R"({"action":{"window_frames":7}})");
  CHECK(partial.action.window_frames == 7);
  CHECK(partial.gesture.theta == 0.65);
  CHECK(error_code([] { parse_config_json(R"({"action":{"windowframes":7}})"); }) == ErrorCode::config);
  CHECK(error_code([] { parse_config_json(R"({"sound":{}})"); }) == ErrorCode::config);
  CHECK(error_code([] { parse_config_json(R"({"action":{"window_frames":2}})"); }) == ErrorCode::config);
}

TEST_CASE("identity pair is perfect at every level") {
  const PedalCurve c = rendered(3, 5);
  const PairResult r = evaluate_aligned(AlignedPair(c, c), {}, {});
  REQUIRE(r.ok());
  CHECK(r.frame->binary.scores.weighted.f1 == 1.0);
  CHECK(r.frame->errors.mse == 0.0);
  CHECK(r.action->scores.macro.f1 == 1.0);
  CHECK(r.gesture->overall.five_point_mse() == 0.0);
  CHECK(r.gesture->overall.fourier_mse() == 0.0);
}

TEST_CASE("binarized highland keeps frame F1 but loses its contour") {
  CurveScript script;
  GestureSpec s = GestureSpec::defaults(GestureCategory::highland);
  s.peak_depth = 0.8;
  script.items = {PlainGap{50}, s, PlainGap{50}};
  const PedalCurve ref = render_script(script).curve;
  std::vector<double> bin(ref.values().begin(), ref.values().end());
  for (double& x : bin) x = x >= 0.5 ? 1.0 : 0.0;
  const PairResult r = evaluate_aligned(AlignedPair(ref, curve(bin)), {}, {});
  CHECK(r.frame->binary.scores.weighted.f1 == 1.0);
  CHECK(r.gesture->per_category.at(GestureCategory::highland).fourier_mse() > 0.0);
}

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest("reference,estimate\na.csv,b.csv\n/abs/c.csv,d.json\n", "/base");
  REQUIRE(m.size() == 2);
  CHECK(m[0].reference == std::filesystem::path("/base/a.csv"));
  CHECK(m[1].reference == std::filesystem::path("/abs/c.csv"));
  CHECK(error_code([] { parse_manifest("ref,est\na,b\n", "/"); }) == ErrorCode::parse);
  CHECK(error_code([] { parse_manifest("", "/"); }) == ErrorCode::empty_input);
}

TEST_CASE("corpus aggregation") {
  TempDir dir("pedaleval_report_test");
  const PedalCurve a = rendered(11, 4), b = rendered(12, 6);
  const auto a_est = curve(perturb(a.values(), 0.03, 2, 1));
  const auto b_est = curve(perturb(b.values(), 0.03, -3, 2));
  const auto ra = dir.write("a_ref.json", curve_to_json(a));
  const auto ea = dir.write("a_est.csv", curve_to_csv(a_est));
  const auto rb = dir.write("b_ref.csv", curve_to_csv(b));
  const auto eb = dir.write("b_est.json", curve_to_json(b_est));
  dir.write("bad.csv", "0.1\n7\n");
  const EvalConfig cfg;

  SUBCASE("a single pair aggregates to itself") {
    const std::vector<ManifestEntry> m = {{ra, ea}};
    const EvalReport report = evaluate_corpus(m, cfg, {});
    const json doc = json::parse(report_to_json(report, {.precise = true}));
    const json& pair = doc["pairs"][0];
    const json& agg = doc["aggregate"];
    CHECK(agg["frame"]["binary"]["f1"] == pair["frame"]["binary"]["f1"]);
    CHECK(agg["frame"]["fourclass"]["macro"] == pair["frame"]["fourclass"]["macro"]);
    CHECK(agg["frame"]["mse"] == pair["frame"]["mse"]);
    CHECK(agg["frame"]["mae"] == pair["frame"]["mae"]);
    CHECK(agg["action"]["macro"] == pair["action"]["macro"]);
    CHECK(agg["action"]["weighted"] == pair["action"]["weighted"]);
    CHECK(agg["gesture"]["weighted"] == pair["gesture"]["weighted"]);
    CHECK(agg["gesture"]["distribution"] == pair["gesture"]["distribution"]);
  }

  SUBCASE("gesture means are weighted by frames across pairs") {
    const std::vector<ManifestEntry> m = {{ra, ea}, {rb, eb}};
    const EvalReport report = evaluate_corpus(m, cfg, {});
    REQUIRE(report.failed_count() == 0);
    const auto& ga = report.pairs[0].gesture->overall;
    const auto& gb = report.pairs[1].gesture->overall;
    const double expected = (ga.five_point_mse() * ga.n_frames + gb.five_point_mse() * gb.n_frames) /
                            static_cast<double>(ga.n_frames + gb.n_frames);
    const json doc = json::parse(report_to_json(report, {.precise = true}));
    CHECK(doc["aggregate"]["gesture"]["weighted"]["five_point_mse"].get<double>() ==
          doctest::Approx(expected).epsilon(1e-12));
    const auto& fa = *report.pairs[0].frame;
    const auto& fb = *report.pairs[1].frame;
    CHECK(doc["aggregate"]["frame"]["mse"].get<double>() ==
          doctest::Approx((fa.sum_squared_error + fb.sum_squared_error) / double(fa.n_frames + fb.n_frames)));
  }

  SUBCASE("manifest order does not change the aggregate") {
    const std::vector<ManifestEntry> m1 = {{ra, ea}, {rb, eb}};
    const std::vector<ManifestEntry> m2 = {{rb, eb}, {ra, ea}};
    const json d1 = json::parse(report_to_json(evaluate_corpus(m1, cfg, {})));
    const json d2 = json::parse(report_to_json(evaluate_corpus(m2, cfg, {.jobs = 3})));
    CHECK(d1["aggregate"] == d2["aggregate"]);
  }

  SUBCASE("failures are recorded and the run continues") {
    const std::vector<ManifestEntry> m = {{ra, ea}, {ra, dir.path / "bad.csv"}, {dir.path / "none.csv", ea}};
    const EvalReport report = evaluate_corpus(m, cfg, {});
    CHECK(report.failed_count() == 2);
    CHECK(report.pairs[0].ok());
    CHECK(report.pairs[1].failure->code == ErrorCode::range);
    CHECK(report.pairs[2].failure->code == ErrorCode::io);
    const json doc = json::parse(report_to_json(report));
    CHECK(doc["pairs"][1]["status"] == "failed");
    CHECK(doc["pairs"][1]["error"]["message"].get<std::string>().find("bad.csv") != std::string::npos);
  }

  SUBCASE("reports are deterministic and the config echo re-parses") {
    const std::vector<ManifestEntry> m = {{ra, ea}, {rb, eb}};
    const std::string one = report_to_json(evaluate_corpus(m, cfg, {}));
    const std::string two = report_to_json(evaluate_corpus(m, cfg, {.jobs = 4}));
    CHECK(one == two);
    const json doc = json::parse(one);
    CHECK(parse_config_json(doc["config"].dump()) == cfg);
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"aggregate", "config", "pairs", "provenance"});
    CHECK(doc["provenance"]["input_sha256"][0]["reference"] == sha256_hex(read_text_file(ra)));
    CHECK_FALSE(doc["provenance"].contains("timestamp"));
  }

  SUBCASE("floats are rounded to six significant digits") {
    const std::vector<ManifestEntry> m = {{ra, ea}};
    const json doc = json::parse(report_to_json(evaluate_corpus(m, cfg, {})));
    const double mse = doc["pairs"][0]["frame"]["mse"].get<double>();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", mse);
    CHECK(std::strtod(buf, nullptr) == mse);
  }
}

TEST_CASE("mismatched rates under strict alignment") {
  TempDir dir("pedaleval_report_rates");
  const auto r = dir.write("r.json", R"({"frame_rate_hz":100,"values":[0,0.1,0.2,0.3]})");
  const auto e = dir.write("e.json", R"({"frame_rate_hz":100,"values":[0,0.1,0.2]})");
  EvalConfig cfg;
  cfg.io.align_policy = AlignPolicy::strict;
  CHECK(error_code([&] { evaluate_pair(r, e, cfg, {}); }) == ErrorCode::alignment);
  cfg.io.align_policy = AlignPolicy::truncate;
  CHECK(evaluate_pair(r, e, cfg, {}).n_frames == 3);
}

TEST_CASE("plot data") {
  std::vector<double> v(1000, 0.0);
  for (std::size_t i = 200; i < 500; ++i) v[i] = 0.8;
  const PedalCurve c = curve(v);
  EvalReport report;
  report.pairs.push_back(evaluate_aligned(AlignedPair(c, c), {}, {.include_curves = true}));
  const std::string text = report_to_json(report);

  const json bars = json::parse(emit_plot_data(text, PlotKind::distribution_bars, 0));
  double total = 0;
  std::size_t gesture_rows = 0;
  for (const auto& row : bars["rows"]) {
    if (row["level"] != "gesture" || row["row"] != "reference") continue;
    ++gesture_rows;
    CHECK(row["bars"].size() == 2);
    for (const auto& bar : row["bars"]) total += bar["value"].get<double>();
  }
  CHECK(gesture_rows == 1);
  CHECK(total == doctest::Approx(1.0));

  const json overlay = json::parse(emit_plot_data(text, PlotKind::curve_overlay, 0));
  REQUIRE(overlay["series"].size() == 2);
  CHECK(overlay["series"][0]["values"].size() == overlay["series"][1]["values"].size());

  const json timeline = json::parse(emit_plot_data(text, PlotKind::segment_timeline, 0));
  const auto& segs = report.pairs[0].action->reference_segments;
  REQUIRE(timeline["tracks"][0]["segments"].size() == segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(timeline["tracks"][0]["segments"][i]["start_frame"] == segs[i].start_frame);
    CHECK(timeline["tracks"][0]["segments"][i]["end_frame"] == segs[i].end_frame);
    CHECK(timeline["tracks"][0]["segments"][i]["state"] == to_string(segs[i].state));
  }

  EvalReport bare;
  bare.pairs.push_back(evaluate_aligned(AlignedPair(c, c), {}, {.levels = kFrameLevel}));
  const std::string bare_text = report_to_json(bare);
  CHECK(error_code([&] { emit_plot_data(bare_text, PlotKind::curve_overlay, 0); }) == ErrorCode::not_computed);
  CHECK(error_code([&] { emit_plot_data(bare_text, PlotKind::distribution_bars, 0); }) ==
        ErrorCode::not_computed);
  CHECK(error_code([] { parse_plot_kind("pie"); }) == ErrorCode::parameter);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
