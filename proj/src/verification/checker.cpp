#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tapdrag/gesture_integrator.hpp"
#include "tapdrag/trace_io.hpp"
#include "tapdrag/verification.hpp"

namespace tapdrag::verify {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool moves_objects(const GestureEvent& g) {
  return holds<PreviewMoved>(g) || holds<Committed>(g) || holds<Reverted>(g) ||
         holds<DragMoved>(g) || holds<ManipulationUpdated>(g);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool near(Point2 a, Point2 b, double tol) { return distance(a, b) <= tol; }

// Poses only; selection changes are not movement.
bool same_poses(const Scene& a, const Scene& b) {
  const auto x = a.objects();
  const auto y = b.objects();
  return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                    [](const SceneObject& p, const SceneObject& q) {
                      return p.center == q.center && p.rotation == q.rotation &&
                             p.scale == q.scale;
                    });
}

std::string str(Point2 p) {
  std::ostringstream s;
  s << '(' << p.x << ',' << p.y << ')';
  return s.str();
}

std::vector<TouchId> mode_touches(const InteractionMode& m) {
  return std::visit(overloaded{
                        [](const mode::Quiescent&) { return std::vector<TouchId>{}; },
                        [](const mode::TradDragging& t) { return std::vector<TouchId>{t.touch}; },
                        [](const mode::Manipulating& t) {
                          return std::vector<TouchId>{t.touch_a, t.touch_b};
                        },
                        [](const mode::RubberBand& t) { return std::vector<TouchId>{t.touch}; },
                        [](const mode::AmbiguousPair& t) {
                          return std::vector<TouchId>{t.source, t.target};
                        },
                    },
                    m);
}

// Everything the checker remembers between events.
class Checker {
 public:
  Checker(const Scene& scene, const EngineConfig& config) : session_(scene, config) {}

  std::optional<StreamVerdict> step(std::size_t index, const TouchEvent& e) {
    index_ = index;
    const Scene before = session_.scene();
    const InteractionMode mode_before = session_.mode();
    const TouchRegistry reg_before = session_.registry();

    std::vector<GestureEvent> out;
    try {
      session_.process_event(e, out);
    } catch (const std::exception& ex) {
      return fail("exception", ex.what());
    }
    log_.insert(log_.end(), out.begin(), out.end());

    switch (e.phase) {
      case Phase::down:
        down_.insert(e.touch_id);
        max_dist_[e.touch_id] = 0.0;
        break;
      case Phase::move: {
        const Point2 d = session_.registry().at(e.touch_id).down_point;
        max_dist_[e.touch_id] = std::max(max_dist_[e.touch_id], distance(d, e.position));
        break;
      }
      case Phase::up:
        down_.erase(e.touch_id);
        max_dist_.erase(e.touch_id);
        break;
    }

    if (auto v = check_registry(reg_before)) return v;
    if (auto v = check_exclusion()) return v;
    if (!scene_consistent(session_.scene())) return fail("scene_consistent", "");
    if (!same_poses(session_.scene(), before) && std::none_of(out.begin(), out.end(), moves_objects)) {
      return fail("position_safety", "scene changed without a movement event");
    }
    if (auto v = check_events(out, mode_before)) return v;
    if (auto v = check_geometry(out)) return v;
    return std::nullopt;
  }

  std::optional<StreamVerdict> finish() {
    if (!session_.registry().empty()) return fail("bracketing", "registry not empty at end");
    if (!td_is_idle(session_.tapdrag_state()) ||
        !std::holds_alternative<mode::Quiescent>(session_.mode())) {
      return fail("bracketing", "not idle at end");
    }
    if (source_open_) return fail("bracketing", "source never resolved");
    if (ghost_open_) return fail("bracketing", "ghost never resolved");
    if (drag_open_) return fail("bracketing", "drag never dropped");
    return std::nullopt;
  }

  const std::vector<GestureEvent>& log() const { return log_; }
  const Scene& scene() const { return session_.scene(); }

 private:
  StreamVerdict fail(std::string kind, std::string detail) const {
    return {std::move(kind), "event " + std::to_string(index_) + ": " + std::move(detail)};
  }

  std::optional<StreamVerdict> check_registry(const TouchRegistry& before) const {
    const TouchRegistry& reg = session_.registry();
    if (reg.size() != down_.size()) return fail("registry", "size differs from down set");
    for (const auto& [id, info] : reg) {
      if (!down_.contains(id)) return fail("registry", "tracks a lifted touch");
      const bool expected = max_dist_.at(id) > session_.config().slop_radius;
      if (info.moved_beyond_slop != expected) return fail("slop", "flag disagrees with path");
      if (auto it = before.find(id);
          it != before.end() && it->second.moved_beyond_slop && !info.moved_beyond_slop) {
        return fail("slop", "flag reset");
      }
    }
    for (TouchId id : td_tracked_touches(session_.tapdrag_state())) {
      if (!down_.contains(id)) return fail("registry", "machine tracks a lifted touch");
    }
    for (TouchId id : mode_touches(session_.mode())) {
      if (!down_.contains(id)) return fail("registry", "mode tracks a lifted touch");
    }
    return std::nullopt;
  }

  std::optional<StreamVerdict> check_exclusion() const {
    const TapDragState& td = session_.tapdrag_state();
    const InteractionMode& m = session_.mode();
    if (const auto* pair = std::get_if<mode::AmbiguousPair>(&m)) {
      const auto* held = std::get_if<td::SourceHeld>(&td);
      if (!held || held->source != pair->source || held->object != pair->object) {
        return fail("exclusion", "ambiguous pair without matching held source");
      }
      return std::nullopt;
    }
    if (!std::holds_alternative<mode::Quiescent>(m) && !td_is_idle(td)) {
      return fail("exclusion", std::string(mode_name(m)) + " with " +
                                   std::string(td_state_name(td)));
    }
    return std::nullopt;
  }

  std::optional<StreamVerdict> check_events(const std::vector<GestureEvent>& out,
                                            const InteractionMode& mode_before) {
    for (const GestureEvent& g : out) {
      if (const auto* a = std::get_if<SourceAcquired>(&g)) {
        if (source_open_) return fail("source_exclusivity", "second SourceAcquired");
        source_open_ = true;
        source_object_ = a->object;
        acquired_ = session_.scene();  // nothing moves on acquisition
      } else if (const auto* c = std::get_if<Committed>(&g)) {
        if (!source_open_) return fail("source_exclusivity", "Committed without source");
        if (auto v = check_commit(*c)) return v;
        source_open_ = false;
      } else if (holds<Aborted>(g)) {
        if (!source_open_) return fail("source_exclusivity", "Aborted without source");
        if (session_.scene() != acquired_) return fail("position_safety", "abort moved the scene");
        source_open_ = false;
      } else if (const auto* r = std::get_if<Reverted>(&g)) {
        if (!source_open_) return fail("source_exclusivity", "Reverted without source");
        if (r->to != acquired_.at(r->object).center) return fail("cancel", "revert target");
        if (session_.scene() != acquired_) return fail("cancel", "revert not exact");
      } else if (holds<PreviewMoved>(g)) {
        if (!source_open_) return fail("source_exclusivity", "preview without source");
      } else if (holds<DragStarted>(g)) {
        if (!source_open_) return fail("source_exclusivity", "drag without held source");
        if (drag_open_) return fail("bracketing", "nested drag");
        source_open_ = false;
        drag_open_ = true;
      } else if (const auto* dm = std::get_if<DragMoved>(&g)) {
        if (!drag_open_) return fail("bracketing", "DragMoved outside a drag");
        if (auto v = check_group_drag(dm->object)) return v;
      } else if (holds<Dropped>(g)) {
        if (!drag_open_) return fail("bracketing", "Dropped outside a drag");
        drag_open_ = false;
      } else if (holds<GhostShown>(g)) {
        if (ghost_open_) return fail("ghost", "second ghost");
        if (!std::holds_alternative<mode::AmbiguousPair>(session_.mode())) {
          return fail("ghost", "ghost without ambiguous pair");
        }
        ghost_open_ = true;
      } else if (const auto* gr = std::get_if<GhostResolved>(&g)) {
        if (!ghost_open_) return fail("ghost", "resolution without ghost");
        ghost_open_ = false;
        if (gr->as == GhostResolution::manipulation) {
          // The held source turns into one finger of a manipulation.
          source_open_ = false;
          }
      }
    }
    if (ghost_open_ && !std::holds_alternative<mode::AmbiguousPair>(session_.mode())) {
      return fail("ghost", "ghost left open");
    }
    if (source_open_) {
      const TapDragState& td = session_.tapdrag_state();
      const bool holding =
          std::holds_alternative<td::SourceHeld>(td) || std::holds_alternative<td::Preview>(td);
      const bool rescinded = std::holds_alternative<mode::Manipulating>(session_.mode()) &&
                             !std::holds_alternative<mode::Manipulating>(mode_before);
      if (rescinded) {
        if (session_.scene() != acquired_) return fail("position_safety", "rescind moved scene");
        source_open_ = false;
      } else if (!holding) {
        return fail("source_exclusivity", "source vanished without resolution");
      }
    }
    return std::nullopt;
  }

  // Selected companions follow the grabbed object; everything else stays.
  // `acquired_` is still the pre-drag scene since nothing moves before
  // DragStarted.
  std::optional<StreamVerdict> check_group_drag(ObjectId grabbed) const {
    const Scene& now = session_.scene();
    const Vector2 delta = now.at(grabbed).center - acquired_.at(grabbed).center;
    const bool group = now.selection().contains(grabbed);
    for (const SceneObject& o : now.objects()) {
      if (o.id == grabbed) continue;
      const Point2 was = acquired_.at(o.id).center;
      if (group && now.selection().contains(o.id)) {
        if (!near(o.center, was + delta, 1e-6)) return fail("group_drag", "companion lags");
      } else if (o.center != was) {
        return fail("group_drag", "bystander moved");
      }
    }
    return std::nullopt;
  }

  std::optional<StreamVerdict> check_commit(const Committed& c) const {
    const Scene& now = session_.scene();
    std::set<ObjectId> moved(c.objects.begin(), c.objects.end());
    if (!moved.contains(source_object_)) return fail("commit", "held object not in commit");
    for (const SceneObject& o : now.objects()) {
      const Point2 was = acquired_.at(o.id).center;
      if (!moved.contains(o.id)) {
        if (o.center != was) return fail("commit", "bystander moved");
      } else if (o.id == source_object_) {
        if (!near(o.center, was + c.translation, 1e-9)) return fail("commit", "held object");
      } else if (o.center != was + c.translation) {
        return fail("commit", "group member not translated exactly");
      }
    }
    return std::nullopt;
  }

  std::optional<StreamVerdict> check_geometry(const std::vector<GestureEvent>& out) const {
    const Scene& scene = session_.scene();
    const TouchRegistry& reg = session_.registry();
    if (const auto* p = std::get_if<td::Preview>(&session_.tapdrag_state())) {
      if (p->target_point != reg.at(p->target).last_point) {
        return fail("preview_tracking", "target point " + str(p->target_point));
      }
      if (scene.at(p->object).center != p->target_point + p->grab_offset) {
        return fail("preview_tracking", "object off target");
      }
    }
    if (const auto* t = std::get_if<mode::TradDragging>(&session_.mode())) {
      const bool moved = std::any_of(out.begin(), out.end(),
                                     [](const GestureEvent& g) { return holds<DragMoved>(g); });
      if (moved && scene.at(t->object).center != reg.at(t->touch).last_point + t->grab_offset) {
        return fail("drag_exactness", "object not under finger");
      }
    }
    if (const auto* m = std::get_if<mode::Manipulating>(&session_.mode())) {
      const Point2 a = reg.at(m->touch_a).last_point;
      const Point2 b = reg.at(m->touch_b).last_point;
      const SceneObject& o = scene.at(m->object);
      if (a == m->start_a && b == m->start_b) {
        const double tol = 1e-9 * std::max(1.0, distance({}, m->start_pose.center));
        if (!near(o.center, m->start_pose.center, tol) ||
            !near(o.rotation, m->start_pose.rotation, 1e-12) ||
            !near(o.scale, m->start_pose.scale, 1e-12)) {
          return fail("manipulation_anchoring", "pose drifted at start points");
        }
      }
      for (const GestureEvent& g : out) {
        if (const auto* u = std::get_if<ManipulationUpdated>(&g)) {
          if (!near(u->transform.apply(m->start_a), a, 1e-6) ||
              !near(u->transform.apply(m->start_b), b, 1e-6)) {
            return fail("manipulation_anchoring", "transform misses touch points");
          }
        }
      }
    }
    return std::nullopt;
  }

  RecognizerSession session_;
  std::vector<GestureEvent> log_;
  std::set<TouchId> down_;
  std::map<TouchId, double> max_dist_;
  std::size_t index_ = 0;

  bool source_open_ = false;
  ObjectId source_object_{};
  Scene acquired_;
  bool ghost_open_ = false;
  bool drag_open_ = false;
};

}  // namespace

std::optional<StreamVerdict> check_stream(std::span<const TouchEvent> events, const Scene& scene,
                                          const EngineConfig& config) {
  Checker checker(scene, config);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (auto v = checker.step(i, events[i])) return v;
  }
  if (auto v = checker.finish()) return v;

  // Determinism: an independent replay yields the same log and scene.
  ReplayResult again;
  try {
    again = replay(events, scene, config);
  } catch (const std::exception& ex) {
    return StreamVerdict{"determinism", ex.what()};
  }
  if (again.final_scene != checker.scene()) return StreamVerdict{"determinism", "final scene"};
  if (again.log.size() != checker.log().size()) return StreamVerdict{"determinism", "log length"};
  for (std::size_t i = 0; i < again.log.size(); ++i) {
    if (again.log[i].event != checker.log()[i]) {
      return StreamVerdict{"determinism", "log entry " + std::to_string(i)};
    }
  }
  return std::nullopt;
}

}  // namespace tapdrag::verify
