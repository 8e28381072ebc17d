#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag {

// TapDrag events.
struct SourceAcquired {
  ObjectId object{};
  friend bool operator==(const SourceAcquired&, const SourceAcquired&) = default;
};
struct PreviewMoved {
  ObjectId object{};
  Point2 to;
  friend bool operator==(const PreviewMoved&, const PreviewMoved&) = default;
};
struct Committed {
  std::vector<ObjectId> objects;  // ascending
  Vector2 translation;
  friend bool operator==(const Committed&, const Committed&) = default;
};
struct Reverted {
  ObjectId object{};
  Point2 to;
  friend bool operator==(const Reverted&, const Reverted&) = default;
};
struct Aborted {
  ObjectId object{};
  friend bool operator==(const Aborted&, const Aborted&) = default;
};
struct SelectionPreview {
  SelectionRegion region;
  friend bool operator==(const SelectionPreview&, const SelectionPreview&) = default;
};
struct SelectionChanged {
  std::vector<ObjectId> ids;  // ascending
  friend bool operator==(const SelectionChanged&, const SelectionChanged&) = default;
};
struct BackgroundTap {
  friend bool operator==(const BackgroundTap&, const BackgroundTap&) = default;
};

// Integrator events.
struct DragStarted {
  ObjectId object{};
  friend bool operator==(const DragStarted&, const DragStarted&) = default;
};
struct DragMoved {
  ObjectId object{};
  Point2 to;
  friend bool operator==(const DragMoved&, const DragMoved&) = default;
};
struct Dropped {
  ObjectId object{};
  Point2 at;
  friend bool operator==(const Dropped&, const Dropped&) = default;
};
struct ManipulationUpdated {
  ObjectId object{};
  // Cumulative since the manipulation began.
  SimilarityTransform transform;
  friend bool operator==(const ManipulationUpdated&, const ManipulationUpdated&) = default;
};
struct GhostShown {
  ObjectId object{};
  Point2 at;
  friend bool operator==(const GhostShown&, const GhostShown&) = default;
};

enum class GhostResolution : std::uint8_t { tapdrag, manipulation };

struct GhostResolved {
  GhostResolution as = GhostResolution::tapdrag;
  friend bool operator==(const GhostResolved&, const GhostResolved&) = default;
};
struct RubberBandChanged {
  RectRegion rect;
  friend bool operator==(const RubberBandChanged&, const RubberBandChanged&) = default;
};

using GestureEvent =
    std::variant<SourceAcquired, PreviewMoved, Committed, Reverted, Aborted, SelectionPreview,
                 SelectionChanged, BackgroundTap, DragStarted, DragMoved, Dropped,
                 ManipulationUpdated, GhostShown, GhostResolved, RubberBandChanged>;

// Upper-snake name used in gesture logs, e.g. "PREVIEW_MOVED".
std::string_view event_name(const GestureEvent& event);

template <typename T>
bool holds(const GestureEvent& event) {
  return std::holds_alternative<T>(event);
}

}  // namespace tapdrag
