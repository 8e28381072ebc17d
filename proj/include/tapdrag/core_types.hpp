#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>

namespace tapdrag {

// All lengths are physical millimeters. Origin is the top-left display
// corner, x grows rightward and y grows downward, so an "up" drag decreases y.

struct Vector2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Vector2&, const Vector2&) = default;

  constexpr Vector2 operator-() const { return {-x, -y}; }
  constexpr Vector2& operator+=(const Vector2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double length() const { return std::hypot(x, y); }
};

constexpr Vector2 operator+(Vector2 a, Vector2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vector2 operator-(Vector2 a, Vector2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vector2 operator*(double s, Vector2 v) { return {s * v.x, s * v.y}; }

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;

  constexpr Point2& operator+=(const Vector2& v) {
    x += v.x;
    y += v.y;
    return *this;
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vector2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator+(Point2 p, Vector2 v) { return {p.x + v.x, p.y + v.y}; }
constexpr Point2 operator-(Point2 p, Vector2 v) { return {p.x - v.x, p.y - v.y}; }

inline double distance(Point2 a, Point2 b) { return (b - a).length(); }
constexpr Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

enum class TouchId : std::uint32_t {};
enum class ObjectId : std::int64_t {};

constexpr auto to_underlying(TouchId id) { return static_cast<std::uint32_t>(id); }
constexpr auto to_underlying(ObjectId id) { return static_cast<std::int64_t>(id); }

enum class Phase : std::uint8_t { down, move, up };

struct TouchEvent {
  double timestamp_ms = 0.0;
  TouchId touch_id{};
  Phase phase = Phase::down;
  // For up events this carries the last known position.
  Point2 position;

  friend bool operator==(const TouchEvent&, const TouchEvent&) = default;
};

struct DisplaySize {
  double width_mm = 708.0;
  double height_mm = 398.0;

  friend bool operator==(const DisplaySize&, const DisplaySize&) = default;
  bool contains(Point2 p) const {
    return p.finite() && p.x >= 0.0 && p.y >= 0.0 && p.x <= width_mm && p.y <= height_mm;
  }
};

enum class Policy : std::uint8_t { fig8, ghost };

// What happens when the second touch of a held object lands on a different
// draggable object.
enum class StackingRule : std::uint8_t { tapdrag_on_object_target, reject_object_target };

struct EngineConfig {
  // 32-inch 16:9 panel.
  DisplaySize display;
  double dpi = 96.0;
  double slop_radius = 5.0;
  Policy policy = Policy::fig8;
  StackingRule stacking_rule = StackingRule::tapdrag_on_object_target;
  double target_tolerance_radius = 17.5;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;

  double mm_per_px() const { return 25.4 / dpi; }
};

// Throws std::invalid_argument naming the offending field.
void validate_config(const EngineConfig& config);

std::string_view to_string(Phase phase);
std::string_view to_string(Policy policy);
std::string_view to_string(StackingRule rule);

enum class StreamErrorKind : std::uint8_t {
  phase_order,
  duplicate_down,
  up_without_down,
  time_regression,
  out_of_bounds,
};

std::string_view to_string(StreamErrorKind kind);

struct StreamError {
  std::size_t index = 0;
  StreamErrorKind kind = StreamErrorKind::phase_order;

  friend bool operator==(const StreamError&, const StreamError&) = default;
};

// Incremental well-formedness check. Feeding events one at a time accepts
// exactly the prefixes of well-formed streams; finish() additionally requires
// every touch to have lifted.
class StreamValidator {
 public:
  explicit StreamValidator(DisplaySize display) : display_(display) {}

  std::optional<StreamError> accept(const TouchEvent& event);
  std::optional<StreamError> finish() const;

  bool is_down(TouchId id) const { return down_.contains(id); }
  std::size_t events_seen() const { return count_; }

 private:
  DisplaySize display_;
  // Value is the index of the touch's down event.
  std::unordered_map<TouchId, std::size_t> down_;
  double last_time_ = 0.0;
  std::size_t count_ = 0;
};

// A stream is accepted iff every touch goes down, moves zero or more times,
// and lifts; timestamps never decrease; every position lies on the display.
// A touch still down at the end is reported as phase_order at its down event.
std::optional<StreamError> validate_stream(std::span<const TouchEvent> events,
                                           const EngineConfig& config);

}  // namespace tapdrag
