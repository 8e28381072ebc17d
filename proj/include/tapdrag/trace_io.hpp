#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/gesture_event.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag {

// Thrown by every text parser in this header. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string reason);

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// Trace file:
//   #display <w_mm> <h_mm>
//   #dpi <value>
//   #config key=value        (keys: policy, slop, stacking, tolerance)
//   <t_ms> <id> <d|m|u> <x_mm> <y_mm>
struct TraceFile {
  std::optional<DisplaySize> display;
  std::optional<double> dpi;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<TouchEvent> events;

  friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

TraceFile parse_trace(std::string_view text);
std::string serialize_trace(const TraceFile& trace);

// Applies one `key=value` option to a config. Returns false for an unknown
// key or malformed value.
bool apply_config_option(EngineConfig& config, std::string_view key, std::string_view value);

// Display, dpi and #config lines layered over `base`.
EngineConfig config_from_trace(const TraceFile& trace, EngineConfig base = {});

// Gesture log: `<t_ms> <EVENT_NAME> key=value ...`, keys sorted, decimals
// with three fraction digits.
struct LogEntry {
  double timestamp_ms = 0.0;
  GestureEvent event;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

void append_log_line(std::string& out, const LogEntry& entry);
std::string format_log_line(const LogEntry& entry);
std::string serialize_gesture_log(std::span<const LogEntry> log);
LogEntry parse_log_line(std::string_view line, std::size_t line_number = 1);
std::vector<LogEntry> parse_gesture_log(std::string_view text);

// Scene snapshot: one object per line,
// `id z kind cx cy param1 [param2] rotation scale draggable selected`,
// kind is `circle` (param1 = radius) or `rect` (width height); six fraction
// digits.
std::string serialize_scene(const Scene& scene);
Scene parse_scene(std::string_view text);

struct ReplayResult {
  std::vector<LogEntry> log;
  Scene final_scene;
};

// Runs `events` through a fresh RecognizerSession. Throws ProtocolViolation
// on a malformed stream.
ReplayResult replay(std::span<const TouchEvent> events, Scene scene, const EngineConfig& config);

}  // namespace tapdrag
