#include "tapdrag/tapdrag_machine.hpp"

#include <string>

namespace tapdrag {

namespace {

using namespace td;

[[noreturn]] void violation(const TouchEvent& event, std::string_view what) {
  throw ProtocolViolation("touch " + std::to_string(to_underlying(event.touch_id)) + ": " +
                          std::string(what));
}

std::vector<ObjectId> to_vector(const ObjectIdSet& ids) { return {ids.begin(), ids.end()}; }

TapDragState commit(const Preview& p, Scene& scene, std::vector<GestureEvent>& out) {
  const Point2 placed = p.target_point + p.grab_offset;
  scene.at(p.object).center = placed;
  const Vector2 delta = placed - p.origin;

  const ObjectIdSet& selection = scene.selection();
  if (selection.contains(p.object)) {
    for (ObjectId id : selection) {
      if (id != p.object) scene.at(id).center += delta;
    }
    out.emplace_back(Committed{to_vector(selection), delta});
  } else {
    out.emplace_back(Committed{{p.object}, delta});
  }
  return TargetResidue{p.target};
}

void finish_selection(Point2 anchor, const std::vector<Point2>& vertices, Scene& scene,
                      std::vector<GestureEvent>& out) {
  const auto region = lasso_region(anchor, vertices);
  if (!region) {
    scene.clear_selection();
    out.emplace_back(BackgroundTap{});
    return;
  }
  scene.set_selection(objects_in_region(scene, *region));
  out.emplace_back(SelectionChanged{to_vector(scene.selection())});
}

TapDragState on_down(TapDragState state, const TouchEvent& e, HitResult hit, Scene& scene,
                     std::vector<GestureEvent>& out) {
  for (TouchId id : td_tracked_touches(state)) {
    if (id == e.touch_id) violation(e, "down on a touch that is already down");
  }
  if (std::holds_alternative<Idle>(state)) {
    if (hit) {
      const Point2 center = scene.at(*hit).center;
      out.emplace_back(SourceAcquired{*hit});
      return SourceHeld{e.touch_id, *hit, center, center - e.position};
    }
    return SelectAnchor{e.touch_id, e.position, {}};
  }
  if (const auto* held = std::get_if<SourceHeld>(&state)) {
    Preview p = td_enter_preview(*held, e.touch_id, e.position, scene);
    out.emplace_back(PreviewMoved{p.object, scene.at(p.object).center});
    return p;
  }
  if (auto* anchor = std::get_if<SelectAnchor>(&state)) {
    SelectVertexHeld next{anchor->anchor, anchor->anchor_point, std::move(anchor->vertices),
                          e.touch_id};
    next.vertices.push_back(e.position);
    out.emplace_back(SelectionPreview{*lasso_region(next.anchor_point, next.vertices)});
    return next;
  }
  // Preview, TargetResidue, SelectVertexHeld: a third touch is not ours.
  return state;
}

TapDragState on_move(TapDragState state, const TouchEvent& e, Scene& scene,
                     std::vector<GestureEvent>& out) {
  if (auto* p = std::get_if<Preview>(&state); p && e.touch_id == p->target) {
    p->target_point = e.position;
    const Point2 placed = p->target_point + p->grab_offset;
    scene.at(p->object).center = placed;
    out.emplace_back(PreviewMoved{p->object, placed});
  } else if (auto* v = std::get_if<SelectVertexHeld>(&state); v && e.touch_id == v->active) {
    v->vertices.back() = e.position;
    out.emplace_back(SelectionPreview{*lasso_region(v->anchor_point, v->vertices)});
  }
  return state;
}

TapDragState on_up(TapDragState state, const TouchEvent& e, Scene& scene,
                   std::vector<GestureEvent>& out) {
  const TouchId id = e.touch_id;
  if (const auto* held = std::get_if<SourceHeld>(&state); held && id == held->source) {
    out.emplace_back(Aborted{held->object});
    return Idle{};
  }
  if (const auto* p = std::get_if<Preview>(&state)) {
    if (id == p->source) return commit(*p, scene, out);
    if (id == p->target) {
      scene.at(p->object).center = p->origin;
      out.emplace_back(Reverted{p->object, p->origin});
      return SourceHeld{p->source, p->object, p->origin, p->grab_offset};
    }
    return state;
  }
  if (const auto* r = std::get_if<TargetResidue>(&state); r && id == r->target) {
    return Idle{};
  }
  if (const auto* a = std::get_if<SelectAnchor>(&state); a && id == a->anchor) {
    finish_selection(a->anchor_point, a->vertices, scene, out);
    return Idle{};
  }
  if (auto* v = std::get_if<SelectVertexHeld>(&state)) {
    if (id == v->active) return SelectAnchor{v->anchor, v->anchor_point, std::move(v->vertices)};
    if (id == v->anchor) {
      // Lasso closed while a vertex finger is still down: that finger
      // becomes inert.
      finish_selection(v->anchor_point, v->vertices, scene, out);
      return TargetResidue{v->active};
    }
  }
  return state;
}

}  // namespace

td::Preview td_enter_preview(const td::SourceHeld& held, TouchId target, Point2 target_point,
                             Scene& scene) {
  scene.at(held.object).center = target_point + held.grab_offset;
  return Preview{held.source, target, held.object, held.origin, held.grab_offset, target_point};
}

TapDragState td_step(TapDragState state, const TouchEvent& event, HitResult hit, Scene& scene,
                     std::vector<GestureEvent>& out) {
  switch (event.phase) {
    case Phase::down: return on_down(std::move(state), event, hit, scene, out);
    case Phase::move: return on_move(std::move(state), event, scene, out);
    case Phase::up: return on_up(std::move(state), event, scene, out);
  }
  return state;
}

std::optional<SelectionRegion> lasso_region(Point2 anchor, const std::vector<Point2>& vertices) {
  if (vertices.empty()) return std::nullopt;
  if (vertices.size() == 1) return RectRegion{anchor, vertices.front()};
  PolygonRegion polygon;
  polygon.vertices.reserve(vertices.size() + 1);
  polygon.vertices.push_back(anchor);
  polygon.vertices.insert(polygon.vertices.end(), vertices.begin(), vertices.end());
  return polygon;
}

bool td_is_idle(const TapDragState& state) { return std::holds_alternative<Idle>(state); }

std::vector<TouchId> td_tracked_touches(const TapDragState& state) {
  return std::visit(
      [](const auto& s) -> std::vector<TouchId> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SourceHeld>) {
          return {s.source};
        } else if constexpr (std::is_same_v<S, Preview>) {
          return {s.source, s.target};
        } else if constexpr (std::is_same_v<S, TargetResidue>) {
          return {s.target};
        } else if constexpr (std::is_same_v<S, SelectAnchor>) {
          return {s.anchor};
        } else if constexpr (std::is_same_v<S, SelectVertexHeld>) {
          return {s.anchor, s.active};
        } else {
          return {};
        }
      },
      state);
}

std::string_view td_state_name(const TapDragState& state) {
  static constexpr std::string_view names[] = {"Idle",          "SourceHeld",   "Preview",
                                               "TargetResidue", "SelectAnchor", "SelectVertexHeld"};
  return names[state.index()];
}

}  // namespace tapdrag
