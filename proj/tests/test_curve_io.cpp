#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pedaleval/curve_io.hpp"
#include "support/helpers.hpp"

using namespace pedaleval;
using namespace pedaleval::testing;

TEST_CASE("single-column csv") {
  const PedalCurve c = load_csv("0.0\n0.5\n1.0", 100.0);
  CHECK(c.frame_rate_hz() == 100.0);
  CHECK(c.values().size() == 3);
  CHECK(c[1] == 0.5);
  CHECK(detect_csv_layout("0.0\n0.5\n1.0") == CsvLayout::single_column);
  CHECK(load_csv("value\r\n0.25\r\n0.75\r\n", 50.0).size() == 2);
  CHECK(load_csv("\xEF\xBB\xBFvalue\n0.25\n", 50.0)[0] == 0.25);
  CHECK(load_csv("depth\n\n0.25\n\n", 50.0).size() == 1);
}

TEST_CASE("two-column csv is sampled and held") {
  const std::string text = "time,value\n0.00,0.0\n0.02,1.0";
  CHECK(detect_csv_layout(text) == CsvLayout::time_value);
  const PedalCurve c = load_csv(text, 100.0);
  CHECK(std::vector<double>(c.values().begin(), c.values().end()) == std::vector<double>{0.0, 0.0, 1.0});
  // Headerless two-field rows are events too.
  const PedalCurve d = load_csv("0.01,0.5\n0.03,0.0\n", 100.0);
  CHECK(std::vector<double>(d.values().begin(), d.values().end()) ==
        std::vector<double>{0.0, 0.5, 0.5, 0.0});
}

TEST_CASE("csv errors carry the line number") {
  CHECK(error_code([] { load_csv("0.0\n1.5", 100.0); }) == ErrorCode::range);
  CHECK(error_message([] { load_csv("0.0\n1.5", 100.0); }).find("line 2") != std::string::npos);
  CHECK(error_code([] { load_csv("value\n0.1\nabc\n", 100.0); }) == ErrorCode::parse);
  CHECK(error_message([] { load_csv("value\n0.1\nabc\n", 100.0); }).find("line 3") !=
        std::string::npos);
  CHECK(error_code([] { load_csv("", 100.0); }) == ErrorCode::empty_input);
  CHECK(error_code([] { load_csv("value\n", 100.0); }) == ErrorCode::empty_input);
  CHECK(error_code([] { load_csv("time,value\n0.5,0.1\n0.2,0.3\n", 100.0); }) == ErrorCode::parse);
}

TEST_CASE("json curves") {
  const PedalCurve c = load_json(R"({"frame_rate_hz":100,"values":[0,0.5]})");
  CHECK(c.frame_rate_hz() == 100.0);
  CHECK(c.size() == 2);
  CHECK(c[1] == 0.5);
  CHECK(load_json(R"({"frame_rate_hz":10,"values":[1],"source_id":"x"})").source_id() == "x");

  CHECK(error_code([] { load_json(R"({"values":[0]})"); }) == ErrorCode::schema);
  CHECK(error_message([] { load_json(R"({"values":[0]})"); }).find("frame_rate_hz missing") !=
        std::string::npos);
  CHECK(error_code([] { load_json(R"({"frame_rate_hz":100,"values":[-0.1]})"); }) == ErrorCode::range);
  CHECK(error_message([] { load_json(R"({"frame_rate_hz":100,"values":[-0.1]})"); })
            .find("values[0]") != std::string::npos);
  CHECK(error_code([] { load_json(R"({"frame_rate_hz":100,"values":[0,"a"]})"); }) == ErrorCode::schema);
  CHECK(error_message([] { load_json(R"({"frame_rate_hz":100,"values":[0,"a"]})"); })
            .find("values[1]") != std::string::npos);
  CHECK(error_code([] { load_json("{"); }) == ErrorCode::parse);
  CHECK(error_code([] { load_json(R"({"frame_rate_hz":100,"values":[]})"); }) == ErrorCode::empty_input);
}

TEST_CASE("files dispatch by extension and resample to the analysis rate") {
  const auto dir = std::filesystem::temp_directory_path() / "pedaleval_curve_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "a.json") << R"({"frame_rate_hz":1,"values":[0,1]})";
    std::ofstream(dir / "b.csv") << "0.0\n0.5\n1.0\n";
    std::ofstream(dir / "c.xyz") << "0.0\n";
  }
  const PedalCurve a = load_curve_file(dir / "a.json", 2.0, 100.0);
  CHECK(a.size() == 3);
  CHECK(a[1] == doctest::Approx(0.5));
  const PedalCurve b = load_curve_file(dir / "b.csv", 100.0, 100.0);
  CHECK(b.size() == 3);
  const PedalCurve b50 = load_curve_file(dir / "b.csv", 200.0, 100.0);
  CHECK(b50.size() == 5);
  CHECK(error_code([&] { load_curve_file(dir / "c.xyz", 100.0, 100.0); }) == ErrorCode::unsupported_format);
  CHECK(error_code([&] { load_curve_file(dir / "missing.csv", 100.0, 100.0); }) == ErrorCode::io);
  const std::string msg = error_message([&] { load_curve_bytes("0\n2\n", "bad.csv", 100.0, 100.0); });
  CHECK(msg.find("bad.csv") != std::string::npos);
  std::filesystem::remove_all(dir);
}
