#include "tapdrag/gesture_event.hpp"

namespace tapdrag {

std::string_view event_name(const GestureEvent& event) {
  static constexpr std::string_view names[] = {
      "SOURCE_ACQUIRED", "PREVIEW_MOVED",  "COMMITTED",     "REVERTED",
      "ABORTED",         "SELECTION_PREVIEW", "SELECTION_CHANGED", "BACKGROUND_TAP",
      "DRAG_STARTED",    "DRAG_MOVED",     "DROPPED",       "MANIPULATION_UPDATED",
      "GHOST_SHOWN",     "GHOST_RESOLVED", "RUBBER_BAND_CHANGED"};
  static_assert(std::size(names) == std::variant_size_v<GestureEvent>);
  return names[event.index()];
}

}  // namespace tapdrag
