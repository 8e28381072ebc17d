#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/gesture_event.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag {

// The TapDrag state machine. It is driven purely by touch ordering: no
// timeouts, no movement thresholds. Object-vs-background classification of
// down events is supplied by the caller.
namespace td {

struct Idle {
  friend bool operator==(const Idle&, const Idle&) = default;
};

// One finger holds an object (the source).
struct SourceHeld {
  TouchId source{};
  ObjectId object{};
  Point2 origin;       // object center when acquired
  Vector2 grab_offset; // object center - touch position
  friend bool operator==(const SourceHeld&, const SourceHeld&) = default;
};

// Source held and a second finger (the target) down: the object is shown at
// target_point + grab_offset.
struct Preview {
  TouchId source{};
  TouchId target{};
  ObjectId object{};
  Point2 origin;
  Vector2 grab_offset;
  Point2 target_point;
  friend bool operator==(const Preview&, const Preview&) = default;
};

// After a commit (or a lasso closed with a vertex finger still down) the
// remaining finger is inert until it lifts.
struct TargetResidue {
  TouchId target{};
  friend bool operator==(const TargetResidue&, const TargetResidue&) = default;
};

// A background hold; later taps add lasso vertices.
struct SelectAnchor {
  TouchId anchor{};
  Point2 anchor_point;
  std::vector<Point2> vertices;
  friend bool operator==(const SelectAnchor&, const SelectAnchor&) = default;
};

struct SelectVertexHeld {
  TouchId anchor{};
  Point2 anchor_point;
  std::vector<Point2> vertices;  // last entry tracks the active touch
  TouchId active{};
  friend bool operator==(const SelectVertexHeld&, const SelectVertexHeld&) = default;
};

}  // namespace td

using TapDragState = std::variant<td::Idle, td::SourceHeld, td::Preview, td::TargetResidue,
                                  td::SelectAnchor, td::SelectVertexHeld>;

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// nullopt = background.
using HitResult = std::optional<ObjectId>;

// Advances the machine by one touch event. Scene mutations (preview, revert,
// commit, selection) are applied to `scene` in the same call; emitted events
// are appended to `out`. Events for touches the machine is not tracking are
// ignored. Throws ProtocolViolation for a down on an id it already tracks.
TapDragState td_step(TapDragState state, const TouchEvent& event, HitResult hit, Scene& scene,
                     std::vector<GestureEvent>& out);

// Moves the held object to its preview position for `target` without emitting
// anything. Used when a preview is entered implicitly (ghost resolution).
td::Preview td_enter_preview(const td::SourceHeld& held, TouchId target, Point2 target_point,
                             Scene& scene);

// Region a selection gesture currently describes: a rectangle for one vertex,
// a polygon (anchor first) for two or more. nullopt for zero vertices.
std::optional<SelectionRegion> lasso_region(Point2 anchor, const std::vector<Point2>& vertices);

bool td_is_idle(const TapDragState& state);
// The touch ids the machine is currently tracking.
std::vector<TouchId> td_tracked_touches(const TapDragState& state);
std::string_view td_state_name(const TapDragState& state);

}  // namespace tapdrag
