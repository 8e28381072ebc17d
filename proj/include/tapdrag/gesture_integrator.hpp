#pragma once

#include <map>
#include <variant>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/gesture_event.hpp"
#include "tapdrag/scene.hpp"
#include "tapdrag/tapdrag_machine.hpp"

namespace tapdrag {

struct TouchInfo {
  Point2 down_point;
  Point2 last_point;
  // Sticky: never resets while the touch is down.
  bool moved_beyond_slop = false;

  friend bool operator==(const TouchInfo&, const TouchInfo&) = default;
};

// Ordered so iteration (and therefore any derived output) is deterministic.
using TouchRegistry = std::map<TouchId, TouchInfo>;

namespace mode {

struct Quiescent {
  friend bool operator==(const Quiescent&, const Quiescent&) = default;
};

// One-finger traditional drag.
struct TradDragging {
  TouchId touch{};
  ObjectId object{};
  Vector2 grab_offset;
  friend bool operator==(const TradDragging&, const TradDragging&) = default;
};

// Two-finger pinch/rotate/move of one object.
struct Manipulating {
  TouchId touch_a{};
  TouchId touch_b{};
  ObjectId object{};
  Point2 start_a;
  Point2 start_b;
  SceneObject start_pose;
  friend bool operator==(const Manipulating&, const Manipulating&) = default;
};

// One-finger box selection on the background.
struct RubberBand {
  TouchId touch{};
  Point2 anchor;
  friend bool operator==(const RubberBand&, const RubberBand&) = default;
};

// GHOST policy only: a held object plus a stationary second touch that may
// still become either a TapDrag or a manipulation.
struct AmbiguousPair {
  TouchId source{};
  TouchId target{};
  ObjectId object{};
  Point2 source_down;
  Point2 target_down;
  friend bool operator==(const AmbiguousPair&, const AmbiguousPair&) = default;
};

}  // namespace mode

using InteractionMode = std::variant<mode::Quiescent, mode::TradDragging, mode::Manipulating,
                                     mode::RubberBand, mode::AmbiguousPair>;

std::string_view mode_name(const InteractionMode& m);

// Routes raw touch events through hit testing and slop tracking and
// arbitrates between TapDrag, traditional drag, two-finger manipulation and
// selection gestures.
//
// Stream contract: events must form a prefix of a well-formed stream (see
// validate_stream). A violating event throws ProtocolViolation and leaves
// the session unchanged.
class RecognizerSession {
 public:
  // Throws std::invalid_argument for an invalid config.
  RecognizerSession(Scene scene, EngineConfig config);

  std::vector<GestureEvent> process_event(const TouchEvent& event);
  // Appends to `out` instead of allocating.
  void process_event(const TouchEvent& event, std::vector<GestureEvent>& out);

  const Scene& scene() const { return scene_; }
  const EngineConfig& config() const { return config_; }
  const TapDragState& tapdrag_state() const { return td_; }
  const InteractionMode& mode() const { return mode_; }
  const TouchRegistry& registry() const { return registry_; }

 private:
  void on_down(const TouchEvent& e, std::vector<GestureEvent>& out);
  void on_move(const TouchEvent& e, const TouchInfo& info, std::vector<GestureEvent>& out);
  void on_up(const TouchEvent& e, std::vector<GestureEvent>& out);

  void second_touch_on_held(const td::SourceHeld& held, const TouchEvent& e, HitResult hit,
                            std::vector<GestureEvent>& out);
  void begin_manipulation(TouchId a, TouchId b, ObjectId object);
  void update_manipulation(const mode::Manipulating& m, std::vector<GestureEvent>& out);
  void translate_with_selection(ObjectId object, Point2 new_center);

  Scene scene_;
  EngineConfig config_;
  TapDragState td_;
  InteractionMode mode_;
  TouchRegistry registry_;
  StreamValidator validator_;
};

}  // namespace tapdrag
