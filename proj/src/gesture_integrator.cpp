#include "tapdrag/gesture_integrator.hpp"

#include <string>

namespace tapdrag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_pair_member(TouchId id, TouchId a, TouchId b) { return id == a || id == b; }

}  // namespace

std::string_view mode_name(const InteractionMode& m) {
  static constexpr std::string_view names[] = {"Quiescent", "TradDragging", "Manipulating",
                                               "RubberBand", "AmbiguousPair"};
  return names[m.index()];
}

RecognizerSession::RecognizerSession(Scene scene, EngineConfig config)
    : scene_(std::move(scene)), config_(config), validator_(config.display) {
  validate_config(config_);
}

std::vector<GestureEvent> RecognizerSession::process_event(const TouchEvent& event) {
  std::vector<GestureEvent> out;
  process_event(event, out);
  return out;
}

void RecognizerSession::process_event(const TouchEvent& e, std::vector<GestureEvent>& out) {
  if (auto error = validator_.accept(e)) {
    throw ProtocolViolation("event " + std::to_string(error->index) + ": " +
                            std::string(to_string(error->kind)));
  }
  switch (e.phase) {
    case Phase::down:
      registry_.insert_or_assign(e.touch_id, TouchInfo{e.position, e.position, false});
      on_down(e, out);
      break;
    case Phase::move: {
      TouchInfo& info = registry_.at(e.touch_id);
      info.last_point = e.position;
      if (!info.moved_beyond_slop && distance(info.down_point, e.position) > config_.slop_radius) {
        info.moved_beyond_slop = true;
      }
      on_move(e, info, out);
      break;
    }
    case Phase::up:
      // The up position is the last known position; it carries no motion.
      on_up(e, out);
      registry_.erase(e.touch_id);
      break;
  }
}

void RecognizerSession::on_down(const TouchEvent& e, std::vector<GestureEvent>& out) {
  if (!std::holds_alternative<mode::Quiescent>(mode_)) return;  // extra finger, inert
  const HitResult hit = hit_test(scene_, e.position);
  if (const auto* held = std::get_if<td::SourceHeld>(&td_)) {
    second_touch_on_held(*held, e, hit, out);
    return;
  }
  td_ = td_step(std::move(td_), e, hit, scene_, out);
}

void RecognizerSession::second_touch_on_held(const td::SourceHeld& held, const TouchEvent& e,
                                             HitResult hit, std::vector<GestureEvent>& out) {
  if (hit == held.object) {
    // Both fingers on one object: a traditional two-finger gesture. The
    // source is rescinded without Aborted since the object never moved.
    const td::SourceHeld h = held;
    td_ = td::Idle{};
    begin_manipulation(h.source, e.touch_id, h.object);
    return;
  }
  if (hit && config_.stacking_rule == StackingRule::reject_object_target) return;

  if (config_.policy == Policy::fig8) {
    td_ = td_step(std::move(td_), e, hit, scene_, out);
    return;
  }
  mode_ = mode::AmbiguousPair{held.source, e.touch_id, held.object,
                              registry_.at(held.source).down_point, e.position};
  out.emplace_back(GhostShown{held.object, e.position + held.grab_offset});
}

void RecognizerSession::on_move(const TouchEvent& e, const TouchInfo& info,
                                std::vector<GestureEvent>& out) {
  const TouchId id = e.touch_id;
  std::visit(
      overloaded{
          [&](const mode::TradDragging& t) {
            if (id != t.touch) return;
            const Point2 to = e.position + t.grab_offset;
            translate_with_selection(t.object, to);
            out.emplace_back(DragMoved{t.object, to});
          },
          [&](const mode::Manipulating& m) {
            if (is_pair_member(id, m.touch_a, m.touch_b)) update_manipulation(m, out);
          },
          [&](const mode::RubberBand& r) {
            if (id == r.touch) out.emplace_back(RubberBandChanged{RectRegion{r.anchor, e.position}});
          },
          [&](const mode::AmbiguousPair& p) {
            if (!is_pair_member(id, p.source, p.target) || !info.moved_beyond_slop) return;
            // A moving finger rules out TapDrag. The ghost never displaced
            // the object, so it is already at its origin.
            out.emplace_back(GhostResolved{GhostResolution::manipulation});
            td_ = td::Idle{};
            begin_manipulation(p.source, p.target, p.object);
            update_manipulation(std::get<mode::Manipulating>(mode_), out);
          },
          [&](const mode::Quiescent&) {
            if (const auto* h = std::get_if<td::SourceHeld>(&td_);
                h && id == h->source && info.moved_beyond_slop) {
              const mode::TradDragging drag{id, h->object, h->grab_offset};
              td_ = td::Idle{};
              mode_ = drag;
              out.emplace_back(DragStarted{drag.object});
              const Point2 to = e.position + drag.grab_offset;
              translate_with_selection(drag.object, to);
              out.emplace_back(DragMoved{drag.object, to});
              return;
            }
            if (const auto* a = std::get_if<td::SelectAnchor>(&td_);
                a && id == a->anchor && a->vertices.empty() && info.moved_beyond_slop) {
              const mode::RubberBand band{id, a->anchor_point};
              td_ = td::Idle{};
              mode_ = band;
              out.emplace_back(RubberBandChanged{RectRegion{band.anchor, e.position}});
              return;
            }
            td_ = td_step(std::move(td_), e, std::nullopt, scene_, out);
          },
      },
      mode_);
}

void RecognizerSession::on_up(const TouchEvent& e, std::vector<GestureEvent>& out) {
  const TouchId id = e.touch_id;
  std::visit(
      overloaded{
          [&](const mode::TradDragging& t) {
            if (id != t.touch) return;
            out.emplace_back(Dropped{t.object, scene_.at(t.object).center});
            mode_ = mode::Quiescent{};
          },
          [&](const mode::Manipulating& m) {
            // The remaining finger stays down but inert.
            if (is_pair_member(id, m.touch_a, m.touch_b)) mode_ = mode::Quiescent{};
          },
          [&](const mode::RubberBand& r) {
            if (id != r.touch) return;
            const RectRegion rect{r.anchor, registry_.at(id).last_point};
            scene_.set_selection(objects_in_region(scene_, rect));
            out.emplace_back(SelectionChanged{{scene_.selection().begin(), scene_.selection().end()}});
            mode_ = mode::Quiescent{};
          },
          [&](const mode::AmbiguousPair& p) {
            if (!is_pair_member(id, p.source, p.target)) return;
            // Stationary pair lifting: TapDrag. Source first commits, target
            // first cancels back to the held source.
            out.emplace_back(GhostResolved{GhostResolution::tapdrag});
            const auto held = std::get<td::SourceHeld>(td_);
            td_ = td_enter_preview(held, p.target, registry_.at(p.target).last_point, scene_);
            mode_ = mode::Quiescent{};
            td_ = td_step(std::move(td_), e, std::nullopt, scene_, out);
          },
          [&](const mode::Quiescent&) { td_ = td_step(std::move(td_), e, std::nullopt, scene_, out); },
      },
      mode_);
}

void RecognizerSession::begin_manipulation(TouchId a, TouchId b, ObjectId object) {
  mode_ = mode::Manipulating{a, b, object, registry_.at(a).down_point, registry_.at(b).down_point,
                             scene_.at(object)};
}

void RecognizerSession::update_manipulation(const mode::Manipulating& m,
                                            std::vector<GestureEvent>& out) {
  const Point2 a = registry_.at(m.touch_a).last_point;
  const Point2 b = registry_.at(m.touch_b).last_point;
  // Coincident fingers define no pivot (start) or a zero scale (now); the
  // pose stays where it last was.
  if (m.start_a == m.start_b || a == b) return;
  const SimilarityTransform xf = similarity_from_touch_pairs(m.start_a, m.start_b, a, b);
  const SceneObject moved = apply_transform(m.start_pose, xf);
  SceneObject& object = scene_.at(m.object);
  object.center = moved.center;
  object.rotation = moved.rotation;
  object.scale = moved.scale;
  out.emplace_back(ManipulationUpdated{m.object, xf});
}

void RecognizerSession::translate_with_selection(ObjectId object, Point2 new_center) {
  SceneObject& grabbed = scene_.at(object);
  const Vector2 delta = new_center - grabbed.center;
  grabbed.center = new_center;
  if (!scene_.selection().contains(object)) return;
  for (ObjectId id : scene_.selection()) {
    if (id != object) scene_.at(id).center += delta;
  }
}

}  // namespace tapdrag
