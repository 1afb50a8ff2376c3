#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "pedaleval/curve.hpp"

namespace pedaleval {

enum class CsvLayout { single_column, time_value };

CsvLayout detect_csv_layout(std::string_view text);

/// Parses CSV text. Single-column input (optional header `value`) is read
/// in order at frame_rate_hz. Two-column input (header `time,value` or two
/// fields per row) is an event list that is sample-and-held onto the grid up
/// to the last event time.
PedalCurve load_csv(std::string_view text, double frame_rate_hz, std::string source_id = {});

/// Parses `{"frame_rate_hz": r, "values": [...], "source_id": "..."}`.
PedalCurve load_json(std::string_view text);

std::string curve_to_json(const PedalCurve& curve);

/// One value per line under a `value` header, written at full precision.
std::string curve_to_csv(const PedalCurve& curve);

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);

/// Loads .csv, .json, .mid or .midi by extension and brings the result to
/// target_rate_hz. Single-column CSV is interpreted at csv_rate_hz; JSON
/// carries its own rate and is resampled; event formats (two-column CSV,
/// SMF) are sampled at target_rate_hz directly.
PedalCurve load_curve_file(const std::filesystem::path& path, double target_rate_hz,
                           double csv_rate_hz);

/// As load_curve_file, on bytes already in memory; `path` picks the format
/// and names the curve.
PedalCurve load_curve_bytes(std::string_view bytes, const std::filesystem::path& path,
                            double target_rate_hz, double csv_rate_hz);

}  // namespace pedaleval
