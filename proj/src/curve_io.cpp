#include "pedaleval/curve_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "format.hpp"
#include "pedaleval/error.hpp"
#include "pedaleval/smf.hpp"

namespace pedaleval {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct CsvRow {
  std::size_t line;
  std::vector<std::string_view> fields;
};

[[noreturn]] void fail_line(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

double checked_depth(std::string_view field, std::size_t line) {
  const auto v = parse_number(field);
  if (!v) fail_line(ErrorCode::parse, line, "malformed number '" + std::string(field) + "'");
  if (*v < 0.0 || *v > 1.0) {
    std::ostringstream msg;
    msg << "value " << *v << " outside [0,1]";
    fail_line(ErrorCode::range, line, msg.str());
  }
  return *v;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

namespace {

struct CsvTable {
  CsvLayout layout = CsvLayout::single_column;
  std::vector<CsvRow> rows;  // data rows only
};

CsvTable parse_csv_table(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    if (!trim(line).empty()) rows.push_back({line_no, split_fields(trim(line))});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (rows.empty()) throw Error(ErrorCode::empty_input, "CSV input holds no data");

  CsvTable table;
  const CsvRow& head = rows.front();
  const bool has_header = std::any_of(head.fields.begin(), head.fields.end(),
                                      [](std::string_view f) { return !parse_number(f); });
  if (has_header) {
    auto is_value = [](const std::string& n) { return n == "value" || n == "depth"; };
    auto is_time = [](const std::string& n) {
      return n == "time" || n == "time_seconds" || n == "t";
    };
    if (head.fields.size() == 1 && is_value(lowercase(head.fields[0]))) {
      table.layout = CsvLayout::single_column;
    } else if (head.fields.size() == 2 && is_time(lowercase(head.fields[0])) &&
               is_value(lowercase(head.fields[1]))) {
      table.layout = CsvLayout::time_value;
    } else {
      fail_line(ErrorCode::parse, head.line,
                "expected a number or a header of 'value' or 'time,value'");
    }
    rows.erase(rows.begin());
    if (rows.empty()) throw Error(ErrorCode::empty_input, "CSV input holds no data");
  } else {
    table.layout = head.fields.size() == 2 ? CsvLayout::time_value : CsvLayout::single_column;
  }
  table.rows = std::move(rows);
  return table;
}

}  // namespace

CsvLayout detect_csv_layout(std::string_view text) { return parse_csv_table(text).layout; }

PedalCurve load_csv(std::string_view text, double frame_rate_hz, std::string source_id) {
  const CsvTable table = parse_csv_table(text);

  if (table.layout == CsvLayout::single_column) {
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const CsvRow& row : table.rows) {
      if (row.fields.size() != 1) fail_line(ErrorCode::parse, row.line, "expected 1 field");
      values.push_back(checked_depth(row.fields[0], row.line));
    }
    return PedalCurve(frame_rate_hz, std::move(values), std::move(source_id));
  }

  std::vector<StepEvent> events;
  events.reserve(table.rows.size());
  for (const CsvRow& row : table.rows) {
    if (row.fields.size() != 2) fail_line(ErrorCode::parse, row.line, "expected 2 fields");
    const auto t = parse_number(row.fields[0]);
    if (!t) {
      fail_line(ErrorCode::parse, row.line, "malformed time '" + std::string(row.fields[0]) + "'");
    }
    if (*t < 0.0) fail_line(ErrorCode::range, row.line, "negative time");
    if (!events.empty() && *t < events.back().time_seconds) {
      fail_line(ErrorCode::parse, row.line, "event times must be non-decreasing");
    }
    events.push_back({*t, checked_depth(row.fields[1], row.line)});
  }
  const double end = events.back().time_seconds;
  return PedalCurve(frame_rate_hz, sample_and_hold(events, end, frame_rate_hz),
                    std::move(source_id));
}

PedalCurve load_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::schema, "curve document must be a JSON object");

  const auto rate_it = doc.find("frame_rate_hz");
  if (rate_it == doc.end()) throw Error(ErrorCode::schema, "frame_rate_hz missing");
  if (!rate_it->is_number()) throw Error(ErrorCode::schema, "frame_rate_hz: expected a number");
  const double rate = rate_it->get<double>();
  if (!(rate > 0.0)) throw Error(ErrorCode::range, "frame_rate_hz: must be positive");

  const auto values_it = doc.find("values");
  if (values_it == doc.end()) throw Error(ErrorCode::schema, "values missing");
  if (!values_it->is_array()) throw Error(ErrorCode::schema, "values: expected an array");
  if (values_it->empty()) throw Error(ErrorCode::empty_input, "values: array is empty");

  std::vector<double> values;
  values.reserve(values_it->size());
  for (std::size_t i = 0; i < values_it->size(); ++i) {
    const json& v = (*values_it)[i];
    const std::string path = "values[" + std::to_string(i) + "]";
    if (!v.is_number()) throw Error(ErrorCode::schema, path + ": expected a number");
    const double d = v.get<double>();
    if (!(d >= 0.0 && d <= 1.0)) {
      std::ostringstream msg;
      msg << path << ": value " << d << " outside [0,1]";
      throw Error(ErrorCode::range, msg.str());
    }
    values.push_back(d);
  }

  std::string source_id;
  if (const auto id = doc.find("source_id"); id != doc.end()) {
    if (!id->is_string()) throw Error(ErrorCode::schema, "source_id: expected a string");
    source_id = id->get<std::string>();
  }
  return PedalCurve(rate, std::move(values), std::move(source_id));
}

std::string curve_to_json(const PedalCurve& curve) {
  nlohmann::json doc;
  doc["frame_rate_hz"] = curve.frame_rate_hz();
  doc["source_id"] = curve.source_id();
  doc["values"] = std::vector<double>(curve.values().begin(), curve.values().end());
  return doc.dump();
}

std::string curve_to_csv(const PedalCurve& curve) {
  std::ostringstream out;
  out << "value\n";
  for (double v : curve.values()) out << detail::shortest(v) << '\n';
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return std::vector<std::uint8_t>(text.begin(), text.end());
}

PedalCurve load_curve_bytes(std::string_view bytes, const std::filesystem::path& path,
                            double target_rate_hz, double csv_rate_hz) {
  const std::string ext = lowercase(path.extension().string());
  const std::string id = path.filename().string();
  try {
    if (ext == ".mid" || ext == ".midi" || ext == ".smf") {
      const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data());
      return extract_cc64_from_smf({data, bytes.size()}, target_rate_hz).with_source_id(id);
    }
    if (ext == ".json") {
      PedalCurve curve = load_json(bytes);
      if (curve.source_id().empty()) curve = curve.with_source_id(id);
      return resample(curve, target_rate_hz);
    }
    if (ext == ".csv" || ext == ".txt") {
      // Event lists are sampled straight onto the target grid.
      if (detect_csv_layout(bytes) == CsvLayout::time_value) {
        return load_csv(bytes, target_rate_hz, id);
      }
      return resample(load_csv(bytes, csv_rate_hz, id), target_rate_hz);
    }
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  throw Error(ErrorCode::unsupported_format,
              path.string() + ": unsupported extension (expected .csv, .json, .mid, .midi)");
}

PedalCurve load_curve_file(const std::filesystem::path& path, double target_rate_hz,
                           double csv_rate_hz) {
  return load_curve_bytes(read_text_file(path), path, target_rate_hz, csv_rate_hz);
}

}  // namespace pedaleval
