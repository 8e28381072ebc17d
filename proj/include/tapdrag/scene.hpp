#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "tapdrag/core_types.hpp"

namespace tapdrag {

struct Circle {
  double radius = 0.0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

struct Rectangle {
  double width = 0.0;
  double height = 0.0;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

using Shape = std::variant<Circle, Rectangle>;

struct SceneObject {
  ObjectId id{};
  Point2 center;
  // Shape parameters are unscaled; `scale` and `rotation` apply about center.
  Shape shape = Circle{17.5};
  double rotation = 0.0;
  double scale = 1.0;
  int z = 0;
  bool draggable = true;
  bool selected = false;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;

  // Boundary-inclusive.
  bool contains(Point2 p) const;
};

using ObjectIdSet = std::set<ObjectId>;

class Scene {
 public:
  Scene() = default;
  // Throws std::invalid_argument on duplicate ids or bad shape parameters.
  explicit Scene(std::vector<SceneObject> objects);

  std::span<const SceneObject> objects() const { return objects_; }
  const ObjectIdSet& selection() const { return selection_; }

  const SceneObject* find(ObjectId id) const;
  SceneObject* find(ObjectId id);
  // Throws std::out_of_range for unknown ids.
  const SceneObject& at(ObjectId id) const;
  SceneObject& at(ObjectId id);

  void add(SceneObject object);
  // Replaces the selection; unknown ids are dropped. Mirrors flags on objects.
  void set_selection(const ObjectIdSet& ids);
  void clear_selection() { set_selection({}); }

  friend bool operator==(const Scene&, const Scene&) = default;

 private:
  std::vector<SceneObject> objects_;
  ObjectIdSet selection_;
};

// Returns true when the scene satisfies its invariants (unique ids, positive
// shape/scale, selection flags mirroring the selection set).
bool scene_consistent(const Scene& scene);

// Highest-z draggable object containing p; z ties go to the higher id.
// std::nullopt means background.
std::optional<ObjectId> hit_test(const Scene& scene, Point2 p);

// p -> scale * R(rotation) * p + translation
struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;
  Vector2 translation;

  friend bool operator==(const SimilarityTransform&, const SimilarityTransform&) = default;

  static SimilarityTransform identity() { return {}; }

  Point2 apply(Point2 p) const;
  SimilarityTransform inverse() const;
  // (a.then(b))(p) == b(a(p))
  SimilarityTransform then(const SimilarityTransform& next) const;
};

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The transform carrying p1 -> q1 and p2 -> q2. Throws DegenerateInput when
// p1 == p2.
SimilarityTransform similarity_from_touch_pairs(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

SceneObject apply_transform(const SceneObject& object, const SimilarityTransform& xf);

// Even-odd rule over the closed polygon; points on an edge count as inside.
// Throws DegenerateInput for fewer than three vertices.
bool point_in_polygon(std::span<const Point2> vertices, Point2 p);

struct RectRegion {
  Point2 corner_a;
  Point2 corner_b;
  friend bool operator==(const RectRegion&, const RectRegion&) = default;
  bool contains(Point2 p) const;
};

struct PolygonRegion {
  std::vector<Point2> vertices;
  friend bool operator==(const PolygonRegion&, const PolygonRegion&) = default;
};

using SelectionRegion = std::variant<RectRegion, PolygonRegion>;

// Draggable objects whose center lies inside the region.
ObjectIdSet objects_in_region(const Scene& scene, const SelectionRegion& region);

}  // namespace tapdrag
