#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pedaleval/curve.hpp"

namespace pedaleval {

struct Cc64Event {
  double time_seconds;
  std::uint8_t value;
  std::uint8_t channel;
};

/// What the Standard MIDI File reader keeps: sustain events in effective
/// order and the time of the last event of any kind.
struct SmfPedalTrack {
  std::uint16_t format = 0;
  std::uint16_t n_tracks = 0;
  std::vector<Cc64Event> events;
  double end_seconds = 0.0;
};

/// Parses MThd/MTrk chunks (format 0 or 1), resolving running status, the
/// tempo map (default 500000 us per quarter) and SMPTE time division.
/// Unknown chunk types are skipped. Errors carry the byte offset.
SmfPedalTrack read_smf_pedal_track(std::span<const std::uint8_t> bytes);

/// CC64 on any channel, as a step function value / 127 sampled from t = 0
/// through the last event of the file.
PedalCurve extract_cc64_from_smf(std::span<const std::uint8_t> bytes, double frame_rate_hz);

}  // namespace pedaleval
