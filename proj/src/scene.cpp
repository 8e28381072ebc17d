#include "tapdrag/scene.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <unordered_set>

namespace tapdrag {

namespace {

bool shape_valid(const Shape& shape) {
  if (const auto* c = std::get_if<Circle>(&shape)) {
    return std::isfinite(c->radius) && c->radius > 0.0;
  }
  const auto& r = std::get<Rectangle>(shape);
  return std::isfinite(r.width) && std::isfinite(r.height) && r.width > 0.0 && r.height > 0.0;
}

void check_object(const SceneObject& object) {
  if (!shape_valid(object.shape)) {
    throw std::invalid_argument("object " + std::to_string(to_underlying(object.id)) +
                                ": shape parameters must be positive");
  }
  if (!(std::isfinite(object.scale) && object.scale > 0.0)) {
    throw std::invalid_argument("object " + std::to_string(to_underlying(object.id)) +
                                ": scale must be positive");
  }
  if (!object.center.finite() || !std::isfinite(object.rotation)) {
    throw std::invalid_argument("object " + std::to_string(to_underlying(object.id)) +
                                ": pose must be finite");
  }
}

double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  // remainder yields [-pi, pi]; fold -pi onto +pi.
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

double cross(Vector2 a, Vector2 b) { return a.x * b.y - a.y * b.x; }

bool on_segment(Point2 a, Point2 b, Point2 p) {
  if (cross(b - a, p - a) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool SceneObject::contains(Point2 p) const {
  // Into the object's unrotated, unscaled frame.
  const Vector2 d = p - center;
  const double c = std::cos(-rotation);
  const double s = std::sin(-rotation);
  const double lx = (c * d.x - s * d.y) / scale;
  const double ly = (s * d.x + c * d.y) / scale;
  if (const auto* circle = std::get_if<Circle>(&shape)) {
    return lx * lx + ly * ly <= circle->radius * circle->radius;
  }
  const auto& rect = std::get<Rectangle>(shape);
  return std::abs(lx) <= 0.5 * rect.width && std::abs(ly) <= 0.5 * rect.height;
}

Scene::Scene(std::vector<SceneObject> objects) {
  objects_.reserve(objects.size());
  for (auto& object : objects) add(std::move(object));
}

const SceneObject* Scene::find(ObjectId id) const {
  auto it = std::find_if(objects_.begin(), objects_.end(),
                         [id](const SceneObject& o) { return o.id == id; });
  return it == objects_.end() ? nullptr : &*it;
}

SceneObject* Scene::find(ObjectId id) {
  return const_cast<SceneObject*>(std::as_const(*this).find(id));
}

const SceneObject& Scene::at(ObjectId id) const {
  if (const auto* object = find(id)) return *object;
  throw std::out_of_range("no object with id " + std::to_string(to_underlying(id)));
}

SceneObject& Scene::at(ObjectId id) {
  return const_cast<SceneObject&>(std::as_const(*this).at(id));
}

void Scene::add(SceneObject object) {
  check_object(object);
  if (find(object.id) != nullptr) {
    throw std::invalid_argument("duplicate object id " + std::to_string(to_underlying(object.id)));
  }
  if (object.selected) selection_.insert(object.id);
  objects_.push_back(std::move(object));
}

void Scene::set_selection(const ObjectIdSet& ids) {
  selection_.clear();
  for (auto& object : objects_) {
    object.selected = ids.contains(object.id);
    if (object.selected) selection_.insert(object.id);
  }
}

bool scene_consistent(const Scene& scene) {
  std::unordered_set<ObjectId> seen;
  ObjectIdSet flagged;
  for (const auto& object : scene.objects()) {
    if (!seen.insert(object.id).second) return false;
    if (!shape_valid(object.shape) || !(object.scale > 0.0)) return false;
    if (object.selected) flagged.insert(object.id);
  }
  return flagged == scene.selection();
}

std::optional<ObjectId> hit_test(const Scene& scene, Point2 p) {
  const SceneObject* best = nullptr;
  for (const auto& object : scene.objects()) {
    if (!object.draggable || !object.contains(p)) continue;
    if (best == nullptr || object.z > best->z || (object.z == best->z && object.id > best->id)) {
      best = &object;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

Point2 SimilarityTransform::apply(Point2 p) const {
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return {scale * (c * p.x - s * p.y) + translation.x, scale * (s * p.x + c * p.y) + translation.y};
}

SimilarityTransform SimilarityTransform::inverse() const {
  SimilarityTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = normalize_angle(-rotation);
  const Point2 t = inv.apply(Point2{translation.x, translation.y});
  inv.translation = {-t.x, -t.y};
  return inv;
}

SimilarityTransform SimilarityTransform::then(const SimilarityTransform& next) const {
  SimilarityTransform out;
  out.scale = scale * next.scale;
  out.rotation = normalize_angle(rotation + next.rotation);
  const Point2 t = next.apply(Point2{translation.x, translation.y});
  out.translation = {t.x, t.y};
  return out;
}

SimilarityTransform similarity_from_touch_pairs(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const Vector2 from = p2 - p1;
  const Vector2 to = q2 - q1;
  const double from_len = from.length();
  if (!(from_len > 0.0)) throw DegenerateInput("touch pair has zero separation");

  SimilarityTransform xf;
  xf.scale = to.length() / from_len;
  xf.rotation = normalize_angle(std::atan2(to.y, to.x) - std::atan2(from.y, from.x));
  // Scale-rotate about the origin, then carry the source midpoint onto the
  // destination midpoint.
  const Point2 mapped_mid = xf.apply(midpoint(p1, p2));
  xf.translation = midpoint(q1, q2) - mapped_mid;
  return xf;
}

SceneObject apply_transform(const SceneObject& object, const SimilarityTransform& xf) {
  SceneObject out = object;
  out.center = xf.apply(object.center);
  out.rotation = object.rotation + xf.rotation;
  out.scale = object.scale * xf.scale;
  return out;
}

bool point_in_polygon(std::span<const Point2> vertices, Point2 p) {
  if (vertices.size() < 3) throw DegenerateInput("polygon needs at least three vertices");
  bool inside = false;
  for (std::size_t i = 0, j = vertices.size() - 1; i < vertices.size(); j = i++) {
    const Point2 a = vertices[i];
    const Point2 b = vertices[j];
    if (on_segment(a, b, p)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool RectRegion::contains(Point2 p) const {
  return p.x >= std::min(corner_a.x, corner_b.x) && p.x <= std::max(corner_a.x, corner_b.x) &&
         p.y >= std::min(corner_a.y, corner_b.y) && p.y <= std::max(corner_a.y, corner_b.y);
}

ObjectIdSet objects_in_region(const Scene& scene, const SelectionRegion& region) {
  ObjectIdSet ids;
  for (const auto& object : scene.objects()) {
    if (!object.draggable) continue;
    const bool inside = std::visit(
        [&](const auto& r) {
          if constexpr (std::is_same_v<std::decay_t<decltype(r)>, RectRegion>) {
            return r.contains(object.center);
          } else {
            return point_in_polygon(r.vertices, object.center);
          }
        },
        region);
    if (inside) ids.insert(object.id);
  }
  return ids;
}

}  // namespace tapdrag
