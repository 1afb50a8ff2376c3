#include "pedaleval/smf.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "pedaleval/error.hpp"

namespace pedaleval {

namespace {

constexpr std::uint32_t kDefaultTempoUsPerQuarter = 500000;
constexpr std::uint8_t kSustainController = 64;

[[noreturn]] void format_error(std::size_t offset, const std::string& what) {
  std::ostringstream msg;
  msg << "SMF format error at byte " << offset << ": " << what;
  throw Error(ErrorCode::format, msg.str());
}

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t end)
      : bytes_(bytes), pos_(begin), end_(end) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ >= end_; }

  std::uint8_t u8() {
    if (pos_ >= end_) format_error(pos_, "unexpected end of data");
    return bytes_[pos_++];
  }
  std::uint8_t peek() const {
    if (pos_ >= end_) format_error(pos_, "unexpected end of data");
    return bytes_[pos_];
  }
  std::uint16_t u16() {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint32_t vlq() {
    const std::size_t start = pos_;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint8_t b = u8();
      v = (v << 7) | (b & 0x7F);
      if ((b & 0x80) == 0) return v;
    }
    format_error(start, "variable-length quantity longer than 4 bytes");
  }
  void skip(std::size_t n) {
    if (n > end_ - pos_) format_error(pos_, "length runs past end of chunk");
    pos_ += n;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  std::size_t end_;
};

struct TempoChange {
  std::uint64_t tick;
  std::size_t order;
  std::uint32_t us_per_quarter;
};

struct RawCc64 {
  std::uint64_t tick;
  std::size_t order;
  std::uint8_t value;
  std::uint8_t channel;
};

// Maps absolute ticks to seconds through a piecewise-constant tempo map.
class TickClock {
 public:
  TickClock(std::uint16_t division, std::vector<TempoChange> tempo, std::size_t division_offset) {
    if (division & 0x8000) {
      const int fps_code = -static_cast<int>(static_cast<std::int8_t>(division >> 8));
      const int ticks_per_frame = division & 0xFF;
      double fps = 0.0;
      switch (fps_code) {
        case 24: fps = 24.0; break;
        case 25: fps = 25.0; break;
        case 29: fps = 30000.0 / 1001.0; break;
        case 30: fps = 30.0; break;
        default: {
          std::ostringstream msg;
          msg << "SMPTE division with unsupported frame code " << fps_code << " at byte "
              << division_offset;
          throw Error(ErrorCode::unsupported_format, msg.str());
        }
      }
      if (ticks_per_frame == 0) format_error(division_offset, "SMPTE division with 0 ticks/frame");
      smpte_seconds_per_tick_ = 1.0 / (fps * ticks_per_frame);
      return;
    }
    if (division == 0) format_error(division_offset, "division of 0 ticks per quarter");
    ticks_per_quarter_ = division;
    std::stable_sort(tempo.begin(), tempo.end(), [](const TempoChange& a, const TempoChange& b) {
      return a.tick != b.tick ? a.tick < b.tick : a.order < b.order;
    });
    // Segment list: (start tick, seconds at start, us/quarter); the last change at a tick wins.
    segments_.push_back({0, 0.0, kDefaultTempoUsPerQuarter});
    for (const TempoChange& t : tempo) {
      Segment& back = segments_.back();
      if (t.tick == back.tick) {
        back.us_per_quarter = t.us_per_quarter;
        continue;
      }
      const double start = back.seconds + seconds_in(back, t.tick - back.tick);
      segments_.push_back({t.tick, start, t.us_per_quarter});
    }
  }

  double seconds(std::uint64_t tick) const {
    if (smpte_seconds_per_tick_ > 0.0) return static_cast<double>(tick) * smpte_seconds_per_tick_;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), tick,
                               [](std::uint64_t t, const Segment& s) { return t < s.tick; });
    const Segment& seg = *std::prev(it);
    return seg.seconds + seconds_in(seg, tick - seg.tick);
  }

 private:
  struct Segment {
    std::uint64_t tick;
    double seconds;
    std::uint32_t us_per_quarter;
  };

  double seconds_in(const Segment& seg, std::uint64_t ticks) const {
    return static_cast<double>(ticks) * static_cast<double>(seg.us_per_quarter) /
           (1e6 * static_cast<double>(ticks_per_quarter_));
  }

  double smpte_seconds_per_tick_ = 0.0;
  std::uint32_t ticks_per_quarter_ = 0;
  std::vector<Segment> segments_;
};

}  // namespace

SmfPedalTrack read_smf_pedal_track(std::span<const std::uint8_t> bytes) {
  ByteReader header(bytes, 0, bytes.size());
  if (bytes.size() < 14) format_error(0, "file shorter than an MThd header");
  const std::uint32_t magic = header.u32();
  if (magic != 0x4D546864) format_error(0, "missing MThd magic");
  const std::uint32_t header_len = header.u32();
  if (header_len < 6) format_error(4, "MThd length below 6");
  if (header_len > bytes.size() - 8) format_error(4, "MThd chunk truncated");

  SmfPedalTrack result;
  result.format = header.u16();
  result.n_tracks = header.u16();
  const std::size_t division_offset = header.offset();
  const std::uint16_t division = header.u16();
  if (result.format > 1) {
    throw Error(ErrorCode::unsupported_format,
                "SMF format " + std::to_string(result.format) + " is not supported (0 or 1)");
  }

  std::vector<TempoChange> tempo;
  std::vector<RawCc64> cc64;
  std::uint64_t last_tick = 0;
  std::size_t order = 0;

  std::size_t pos = 8 + header_len;
  std::size_t tracks_seen = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8) format_error(pos, "truncated chunk header");
    ByteReader chunk_head(bytes, pos, bytes.size());
    const std::uint32_t type = chunk_head.u32();
    const std::uint32_t length = chunk_head.u32();
    const std::size_t body = pos + 8;
    if (length > bytes.size() - body) format_error(pos, "chunk length runs past end of file");
    const std::size_t chunk_end = body + length;
    pos = chunk_end;
    if (type != 0x4D54726B) continue;  // not MTrk
    ++tracks_seen;

    ByteReader track(bytes, body, chunk_end);
    std::uint64_t tick = 0;
    std::uint8_t running = 0;
    while (!track.done()) {
      tick += track.vlq();
      std::uint8_t status = track.peek();
      if (status & 0x80) {
        track.u8();
      } else if (running == 0) {
        format_error(track.offset(), "data byte without running status");
      } else {
        status = running;
      }

      if (status == 0xFF) {
        running = 0;
        const std::uint8_t meta = track.u8();
        const std::uint32_t len = track.vlq();
        if (meta == 0x51) {
          if (len != 3) format_error(track.offset(), "tempo event with length != 3");
          std::uint32_t us = track.u8();
          us = (us << 8) | track.u8();
          us = (us << 8) | track.u8();
          tempo.push_back({tick, order++, us});
        } else {
          track.skip(len);
        }
        last_tick = std::max(last_tick, tick);
        if (meta == 0x2F) break;
        continue;
      }
      if (status == 0xF0 || status == 0xF7) {
        running = 0;
        track.skip(track.vlq());
        last_tick = std::max(last_tick, tick);
        continue;
      }
      if (status >= 0xF1) format_error(track.offset() - 1, "system message inside a track");

      running = status;
      const std::uint8_t kind = status & 0xF0;
      const std::uint8_t data1 = track.u8();
      const bool two_bytes = kind != 0xC0 && kind != 0xD0;
      const std::uint8_t data2 = two_bytes ? track.u8() : 0;
      if (kind == 0xB0 && data1 == kSustainController) {
        cc64.push_back({tick, order++, static_cast<std::uint8_t>(data2 & 0x7F),
                        static_cast<std::uint8_t>(status & 0x0F)});
      }
      last_tick = std::max(last_tick, tick);
    }
  }
  if (tracks_seen == 0 && result.n_tracks > 0) format_error(pos, "no MTrk chunk found");

  const TickClock clock(division, std::move(tempo), division_offset);
  std::stable_sort(cc64.begin(), cc64.end(), [](const RawCc64& a, const RawCc64& b) {
    return a.tick != b.tick ? a.tick < b.tick : a.order < b.order;
  });
  result.events.reserve(cc64.size());
  for (const RawCc64& e : cc64) result.events.push_back({clock.seconds(e.tick), e.value, e.channel});
  result.end_seconds = clock.seconds(last_tick);
  return result;
}

PedalCurve extract_cc64_from_smf(std::span<const std::uint8_t> bytes, double frame_rate_hz) {
  const SmfPedalTrack track = read_smf_pedal_track(bytes);
  std::vector<StepEvent> steps;
  steps.reserve(track.events.size());
  for (const Cc64Event& e : track.events) {
    steps.push_back({e.time_seconds, static_cast<double>(e.value) / 127.0});
  }
  return PedalCurve(frame_rate_hz, sample_and_hold(steps, track.end_seconds, frame_rate_hz));
}

}  // namespace pedaleval
