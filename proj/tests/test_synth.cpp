#include <doctest.h>

#include <json.hpp>

#include "pedaleval/synth.hpp"
#include "support/helpers.hpp"

using namespace pedaleval;
using namespace pedaleval::testing;

TEST_CASE("seeded rng is reproducible") {
  SeededRng a(99), b(99), c(100);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.uniform() != c.uniform());
  // Known first output of the 64-bit Mersenne Twister seeded with 5489.
  std::mt19937_64 ref(5489);
  CHECK(ref() == 14514284786278117030ull);
}

TEST_CASE("highland archetype") {
  GestureSpec s = GestureSpec::defaults(GestureCategory::highland);
  s.duration_frames = 200;
  s.peak_depth = 0.8;
  const auto v = gen_gesture(s);
  CHECK(v.size() == 200);
  CHECK(max_depth_ratio(v, 0.65) >= 0.8);
  CHECK(classify_gesture(v.size(), max_depth_ratio(v, 0.65), {}) == GestureCategory::highland);
  CHECK(*std::max_element(v.begin(), v.end()) == doctest::Approx(0.8));
  for (double x : v) CHECK(x >= kGestureFloorDepth);
}

TEST_CASE("pinnacle archetype") {
  GestureSpec s = GestureSpec::defaults(GestureCategory::pinnacle);
  s.duration_frames = 30;
  s.peak_depth = 1.0;
  const auto v = gen_gesture(s);
  CHECK(classify_gesture(v.size(), max_depth_ratio(v, 0.65), {}) == GestureCategory::pinnacle);
}

TEST_CASE("default specs produce their categories") {
  for (auto cat : {GestureCategory::pinnacle, GestureCategory::hill, GestureCategory::highland,
                   GestureCategory::mountain}) {
    const auto v = gen_gesture(GestureSpec::defaults(cat));
    CHECK(classify_gesture(v.size(), max_depth_ratio(v, 0.65), {}) == cat);
  }
}

TEST_CASE("unsatisfiable specs are rejected") {
  GestureSpec s = GestureSpec::defaults(GestureCategory::pinnacle);
  s.duration_frames = 150;
  CHECK(error_code([&] { gen_gesture(s); }) == ErrorCode::spec);
  GestureSpec m = GestureSpec::defaults(GestureCategory::mountain);
  m.oscillation_amplitude = 0.0;
  CHECK(error_code([&] { gen_gesture(m); }) == ErrorCode::spec);
  GestureSpec h = GestureSpec::defaults(GestureCategory::highland);
  h.attack_fraction = 0.6;
  h.release_fraction = 0.5;
  CHECK(error_code([&] { gen_gesture(h); }) == ErrorCode::spec);
  CHECK(error_code([] { GestureSpec::defaults(GestureCategory::plain); }) == ErrorCode::spec);
}

TEST_CASE("random specs always close") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (auto cat : {GestureCategory::pinnacle, GestureCategory::hill, GestureCategory::highland,
                     GestureCategory::mountain}) {
      const auto v = gen_gesture(random_gesture_spec(cat, seed));
      CHECK(classify_gesture(v.size(), max_depth_ratio(v, 0.65), {}) == cat);
    }
  }
}

TEST_CASE("perturb") {
  const auto r = ramp(100, 0.0, 0.01);
  CHECK(perturb(r, 0.0, 0, 1) == r);
  const auto shifted = perturb(r, 0.0, 5, 1);
  for (int i = 0; i < 5; ++i) CHECK(shifted[i] == r[0]);
  for (int i = 5; i < 100; ++i) CHECK(shifted[i] == r[i - 5]);
  const auto back = perturb(r, 0.0, -5, 1);
  for (int i = 95; i < 100; ++i) CHECK(back[i] == r[99]);
  CHECK(perturb(r, 0.02, 0, 42) == perturb(r, 0.02, 0, 42));
  CHECK(perturb(r, 0.02, 0, 42) != perturb(r, 0.02, 0, 43));
  for (double x : perturb(r, 0.5, 3, 7)) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  CHECK(error_code([&] { perturb(r, 0.0, 100, 1); }) == ErrorCode::parameter);
  CHECK(error_code([&] { perturb(r, -1.0, 0, 1); }) == ErrorCode::parameter);
}

TEST_CASE("render script concatenates") {
  CurveScript script;
  script.items = {PlainGap{100}, GestureSpec::defaults(GestureCategory::highland), PlainGap{100}};
  const RenderedScript r = render_script(script);
  CHECK(r.curve.size() == 400);
  REQUIRE(r.intervals.size() == 3);
  CHECK(r.intervals[1].category == GestureCategory::highland);
  CHECK(r.intervals[1].frames == FrameInterval{100, 299});
  CHECK(r.frame_categories[99] == GestureCategory::plain);
  CHECK(r.frame_categories[100] == GestureCategory::highland);

  CurveScript single;
  single.items = {GestureSpec::defaults(GestureCategory::hill)};
  const auto alone = render_script(single);
  const auto g = gen_gesture(GestureSpec::defaults(GestureCategory::hill));
  CHECK(std::equal(alone.curve.values().begin(), alone.curve.values().end(), g.begin(), g.end()));
}

TEST_CASE("render script rejects touching gestures and empty scripts") {
  CurveScript touching;
  touching.items = {GestureSpec::defaults(GestureCategory::hill), GestureSpec::defaults(GestureCategory::hill)};
  CHECK(error_code([&] { render_script(touching); }) == ErrorCode::spec);
  CurveScript empty_gap;
  empty_gap.items = {PlainGap{0}};
  CHECK(error_code([&] { render_script(empty_gap); }) == ErrorCode::spec);
  CHECK(error_code([] { render_script(CurveScript{}); }) == ErrorCode::empty_input);
}

TEST_CASE("random scripts segment back exactly") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const RenderedScript r = render_script(random_script(seed, 10));
    const auto seg = segment_gestures(r.curve, {});
    CHECK(seg.gestures.size() == 10);
    CHECK(ordered_intervals(seg) == r.intervals);
  }
}

TEST_CASE("script json round trip") {
  const CurveScript s = random_script(5, 4, 50.0);
  const CurveScript back = parse_script_json(script_to_json(s));
  CHECK(script_to_json(back) == script_to_json(s));
  CHECK(render_script(back).curve == render_script(s).curve);

  const CurveScript minimal =
      parse_script_json(R"({"items":[{"gap":10},{"gesture":{"category":"pinnacle"}},{"gap":5}]})");
  CHECK(render_script(minimal).curve.size() == 10 + 40 + 5);
  CHECK(error_code([] { parse_script_json(R"({"items":[{"wave":1}]})"); }) == ErrorCode::schema);
  CHECK(error_code([] { parse_script_json("[") ; }) == ErrorCode::parse);
}

TEST_CASE("annotations json") {
  CurveScript script;
  script.items = {PlainGap{3}, GestureSpec::defaults(GestureCategory::pinnacle), PlainGap{2}};
  const auto doc = nlohmann::json::parse(annotations_to_json(render_script(script)));
  CHECK(doc["length"] == 45);
  CHECK(doc["intervals"].size() == 3);
  CHECK(doc["intervals"][1]["category"] == "pinnacle");
  CHECK(doc["intervals"][1]["start"] == 3);
  CHECK(doc["intervals"][1]["end"] == 42);
}
