#include <map>

#include "tapdrag/verification.hpp"

// A deliberately different shape from the recognizer: instead of a state
// variant, every touch carries a role and the rules are read off the set of
// roles currently present. Only down/up streams under FIG8 are covered, so
// traditional drags, rubber bands and ghosts cannot occur.

namespace tapdrag::verify {

namespace {

enum class Role { source, target, anchor, vertex, residue, manip, inert };

struct Oracle {
  Scene scene;
  EngineConfig config;
  std::map<TouchId, Role> roles;

  ObjectId held{};
  Point2 origin;
  Vector2 offset;
  Point2 target_point;

  Point2 anchor_point;
  std::vector<Point2> vertices;

  bool any(Role r) const {
    for (const auto& [id, role] : roles) {
      if (role == r) return true;
    }
    return false;
  }

  void recast(Role from, Role to) {
    for (auto& [id, role] : roles) {
      if (role == from) role = to;
    }
  }

  void down(TouchId id, Point2 p) {
    Role r = Role::inert;
    if (any(Role::manip)) {
      r = Role::inert;
    } else if (any(Role::source)) {
      if (!any(Role::target)) {
        const auto hit = hit_test(scene, p);
        if (hit == held) {
          recast(Role::source, Role::manip);
          r = Role::manip;
        } else if (hit && config.stacking_rule == StackingRule::reject_object_target) {
          r = Role::inert;
        } else {
          r = Role::target;
          target_point = p;
          scene.at(held).center = p + offset;
        }
      }
    } else if (any(Role::anchor)) {
      if (!any(Role::vertex)) {
        r = Role::vertex;
        vertices.push_back(p);
      }
    } else if (!any(Role::residue)) {
      if (const auto hit = hit_test(scene, p)) {
        r = Role::source;
        held = *hit;
        origin = scene.at(held).center;
        offset = origin - p;
      } else {
        r = Role::anchor;
        anchor_point = p;
        vertices.clear();
      }
    }
    roles[id] = r;
  }

  void up(TouchId id) {
    const Role r = roles.at(id);
    roles.erase(id);
    switch (r) {
      case Role::source:
        if (any(Role::target)) {
          const Point2 placed = target_point + offset;
          const Vector2 delta = placed - origin;
          scene.at(held).center = placed;
          if (scene.selection().contains(held)) {
            for (ObjectId other : scene.selection()) {
              if (other != held) scene.at(other).center += delta;
            }
          }
          recast(Role::target, Role::residue);
        }
        break;
      case Role::target:
        scene.at(held).center = origin;
        break;
      case Role::anchor:
        if (vertices.empty()) {
          scene.clear_selection();
        } else if (vertices.size() == 1) {
          scene.set_selection(objects_in_region(scene, RectRegion{anchor_point, vertices[0]}));
        } else {
          PolygonRegion poly{{anchor_point}};
          poly.vertices.insert(poly.vertices.end(), vertices.begin(), vertices.end());
          scene.set_selection(objects_in_region(scene, poly));
        }
        recast(Role::vertex, Role::residue);
        break;
      case Role::manip:
        recast(Role::manip, Role::inert);
        break;
      case Role::vertex:
      case Role::residue:
      case Role::inert:
        break;
    }
  }
};

}  // namespace

Scene oracle_final_scene(std::span<const TouchEvent> events, Scene scene,
                         const EngineConfig& config) {
  if (config.policy != Policy::fig8) throw UnsupportedStream("oracle covers FIG8 only");
  Oracle o{std::move(scene), config, {}, {}, {}, {}, {}, {}, {}};
  for (const TouchEvent& e : events) {
    switch (e.phase) {
      case Phase::move: throw UnsupportedStream("oracle covers down/up streams only");
      case Phase::down: o.down(e.touch_id, e.position); break;
      case Phase::up: o.up(e.touch_id); break;
    }
  }
  return std::move(o.scene);
}

MicroScene micro_scene() {
  MicroScene m;
  m.config.display = {600.0, 300.0};
  const Point2 centers[] = {{150.0, 150.0}, {300.0, 150.0}, {450.0, 150.0}};
  std::int64_t id = 1;
  for (Point2 c : centers) {
    SceneObject o;
    o.id = ObjectId{id++};
    o.center = c;
    o.shape = Circle{17.5};
    m.scene.add(o);
  }
  // Left of, right of, above and below the row, plus gaps between objects.
  m.palette = {{50.0, 150.0},  {550.0, 150.0}, {225.0, 150.0}, {375.0, 150.0}, {150.0, 50.0},
               {300.0, 50.0},  {450.0, 250.0}, {150.0, 250.0}, {300.0, 250.0}};
  return m;
}

}  // namespace tapdrag::verify
