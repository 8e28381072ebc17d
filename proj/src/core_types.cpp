#include "tapdrag/core_types.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace tapdrag {

void validate_config(const EngineConfig& config) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(config.display.width_mm) || !positive(config.display.height_mm)) {
    throw std::invalid_argument("display dimensions must be positive");
  }
  if (!positive(config.slop_radius)) {
    throw std::invalid_argument("slop_radius must be positive");
  }
  if (!positive(config.target_tolerance_radius)) {
    throw std::invalid_argument("target_tolerance_radius must be positive");
  }
  if (!positive(config.dpi)) {
    throw std::invalid_argument("dpi must be positive");
  }
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::down: return "down";
    case Phase::move: return "move";
    case Phase::up: return "up";
  }
  return "?";
}

std::string_view to_string(Policy policy) {
  return policy == Policy::fig8 ? "fig8" : "ghost";
}

std::string_view to_string(StackingRule rule) {
  return rule == StackingRule::tapdrag_on_object_target ? "tapdrag_on_object_target"
                                                        : "reject_object_target";
}

std::string_view to_string(StreamErrorKind kind) {
  switch (kind) {
    case StreamErrorKind::phase_order: return "phase_order";
    case StreamErrorKind::duplicate_down: return "duplicate_down";
    case StreamErrorKind::up_without_down: return "up_without_down";
    case StreamErrorKind::time_regression: return "time_regression";
    case StreamErrorKind::out_of_bounds: return "out_of_bounds";
  }
  return "?";
}

std::optional<StreamError> StreamValidator::accept(const TouchEvent& event) {
  const std::size_t index = count_;
  auto fail = [index](StreamErrorKind kind) { return StreamError{index, kind}; };

  if (!std::isfinite(event.timestamp_ms) || event.timestamp_ms < last_time_) {
    return fail(StreamErrorKind::time_regression);
  }
  if (!display_.contains(event.position)) {
    return fail(StreamErrorKind::out_of_bounds);
  }
  const bool down = down_.contains(event.touch_id);
  switch (event.phase) {
    case Phase::down:
      if (down) return fail(StreamErrorKind::duplicate_down);
      down_.emplace(event.touch_id, index);
      break;
    case Phase::move:
      if (!down) return fail(StreamErrorKind::phase_order);
      break;
    case Phase::up:
      if (!down) return fail(StreamErrorKind::up_without_down);
      down_.erase(event.touch_id);
      break;
  }
  last_time_ = event.timestamp_ms;
  ++count_;
  return std::nullopt;
}

std::optional<StreamError> StreamValidator::finish() const {
  if (down_.empty()) return std::nullopt;
  std::size_t first = std::numeric_limits<std::size_t>::max();
  for (const auto& [id, index] : down_) first = std::min(first, index);
  return StreamError{first, StreamErrorKind::phase_order};
}

std::optional<StreamError> validate_stream(std::span<const TouchEvent> events,
                                           const EngineConfig& config) {
  StreamValidator validator(config.display);
  for (const TouchEvent& event : events) {
    if (auto error = validator.accept(event)) return error;
  }
  return validator.finish();
}

}  // namespace tapdrag
