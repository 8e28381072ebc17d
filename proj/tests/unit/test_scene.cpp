#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tapdrag/scene.hpp"

using namespace tapdrag;

namespace {
SceneObject circle(std::int64_t id, Point2 c, double r, int z = 0, bool draggable = true) {
  SceneObject o;
  o.id = ObjectId{id};
  o.center = c;
  o.shape = Circle{r};
  o.z = z;
  o.draggable = draggable;
  return o;
}
}  // namespace

TEST_CASE("scene rejects bad objects") {
  Scene s;
  s.add(circle(1, {0, 0}, 5));
  CHECK_THROWS_AS(s.add(circle(1, {9, 9}, 5)), std::invalid_argument);
  CHECK_THROWS_AS(s.add(circle(2, {9, 9}, 0)), std::invalid_argument);
  auto o = circle(3, {9, 9}, 1);
  o.scale = 0;
  CHECK_THROWS_AS(s.add(o), std::invalid_argument);
  CHECK(s.objects().size() == 1);
  CHECK_THROWS_AS(s.at(ObjectId{7}), std::out_of_range);
}

TEST_CASE("selection mirrors flags and drops unknown ids") {
  Scene s({circle(1, {0, 0}, 5), circle(2, {50, 0}, 5)});
  s.set_selection({ObjectId{2}, ObjectId{9}});
  CHECK(s.selection() == ObjectIdSet{ObjectId{2}});
  CHECK(s.at(ObjectId{2}).selected);
  CHECK_FALSE(s.at(ObjectId{1}).selected);
  CHECK(scene_consistent(s));
  s.clear_selection();
  CHECK(s.selection().empty());
  CHECK_FALSE(s.at(ObjectId{2}).selected);
}

TEST_CASE("hit test: z order, id tie-break, non-draggable is background") {
  Scene s({circle(1, {100, 100}, 20, 0), circle(2, {110, 100}, 20, 1),
           circle(3, {105, 100}, 20, 1), circle(4, {300, 300}, 20, 9, false)});
  CHECK(hit_test(s, {105, 100}) == ObjectId{3});  // z tie between 2 and 3
  CHECK(hit_test(s, {81, 100}) == ObjectId{1});
  CHECK_FALSE(hit_test(s, {300, 300}).has_value());
  CHECK_FALSE(hit_test(s, {500, 10}).has_value());
  CHECK(hit_test(s, {100, 120}) == ObjectId{1});  // on 1's boundary, just outside 3
}

TEST_CASE("hit test is independent of insertion order") {
  std::vector<SceneObject> objs;
  for (int i = 0; i < 12; ++i) {
    objs.push_back(circle(i + 1, {100.0 + 7 * i, 100.0 + 3 * (i % 4)}, 15, i % 3));
  }
  std::mt19937_64 rng(3);
  const Scene ref(objs);
  for (int round = 0; round < 50; ++round) {
    std::shuffle(objs.begin(), objs.end(), rng);
    const Scene shuffled(objs);
    for (double x = 70; x < 220; x += 2.5) {
      CHECK(hit_test(shuffled, {x, 102}) == hit_test(ref, {x, 102}));
    }
  }
}

TEST_CASE("rotated, scaled rectangle containment") {
  SceneObject r;
  r.id = ObjectId{1};
  r.center = {0, 0};
  r.shape = Rectangle{20, 10};
  r.rotation = std::numbers::pi / 2;
  CHECK(r.contains({0, 9.9}));
  CHECK_FALSE(r.contains({9.9, 0}));
  r.scale = 2;
  CHECK(r.contains({9.9, 0}));
}

TEST_CASE("similarity transform analytic cases") {
  const auto id = similarity_from_touch_pairs({10, 20}, {40, 60}, {10, 20}, {40, 60});
  CHECK(id == SimilarityTransform::identity());

  const auto quarter = similarity_from_touch_pairs({1, 0}, {0, 1}, {0, 1}, {-1, 0});
  CHECK(quarter.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quarter.rotation == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

  const auto pinch = similarity_from_touch_pairs({0, 0}, {10, 0}, {0, 0}, {20, 0});
  CHECK(pinch.scale == 2.0);
  CHECK(pinch.rotation == 0.0);

  CHECK_THROWS_AS(similarity_from_touch_pairs({1, 1}, {1, 1}, {0, 0}, {1, 0}), DegenerateInput);
}

TEST_CASE("half turn normalizes to +pi") {
  const auto half = similarity_from_touch_pairs({0, 0}, {1, 0}, {0, 0}, {-1, 0});
  CHECK(half.rotation == doctest::Approx(std::numbers::pi));
  CHECK(half.rotation > 0);
}

TEST_CASE("transform properties on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-300, 300);
  auto pt = [&] { return Point2{u(rng), u(rng)}; };
  for (int i = 0; i < 10000; ++i) {
    const Point2 p1 = pt(), p2 = pt(), q1 = pt(), q2 = pt();
    if (distance(p1, p2) < 1e-3 || distance(q1, q2) < 1e-3) continue;
    const auto xf = similarity_from_touch_pairs(p1, p2, q1, q2);
    REQUIRE(distance(xf.apply(p1), q1) <= 1e-6);
    REQUIRE(distance(xf.apply(p2), q2) <= 1e-6);
    // inverse and composition
    const Point2 r = pt();
    REQUIRE(distance(xf.inverse().apply(xf.apply(r)), r) <= 1e-6);
    REQUIRE(distance(xf.then(xf.inverse()).apply(r), r) <= 1e-6);
  }
}

TEST_CASE("apply_transform with identity is exact on every field") {
  SceneObject o = circle(1, {12.3, 45.6}, 7);
  o.rotation = 5.0;  // deliberately outside (-pi, pi]
  o.scale = 1.7;
  CHECK(apply_transform(o, SimilarityTransform::identity()) == o);
}

TEST_CASE("point in polygon") {
  const std::vector<Point2> square = {{0, 0}, {50, 0}, {50, 50}, {0, 50}};
  CHECK(point_in_polygon(square, {25, 25}));
  CHECK_FALSE(point_in_polygon(square, {100, 100}));
  CHECK(point_in_polygon(square, {50, 25}));  // edge counts
  CHECK(point_in_polygon(square, {0, 0}));    // vertex counts
  // Self-intersecting bow tie: even-odd leaves the crossing lobes inside.
  const std::vector<Point2> bow = {{0, 0}, {40, 40}, {40, 0}, {0, 40}};
  CHECK(point_in_polygon(bow, {5, 20}));
  CHECK_FALSE(point_in_polygon(bow, {20, 5}));
  const std::vector<Point2> two = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(point_in_polygon(two, {0, 0}), DegenerateInput);
}

TEST_CASE("convex polygon agrees with half-plane test") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), pos(-150, 150);
  for (int poly = 0; poly < 200; ++poly) {
    std::vector<double> a(3 + poly % 6);
    for (double& x : a) x = ang(rng);
    std::sort(a.begin(), a.end());
    std::vector<Point2> v;
    for (double t : a) v.push_back({100 * std::cos(t), 100 * std::sin(t)});
    for (int k = 0; k < 100; ++k) {
      const Point2 p{pos(rng), pos(rng)};
      bool inside = true;
      double min_margin = 1e300;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vector2 e = v[(i + 1) % v.size()] - v[i];
        const double c = e.x * (p.y - v[i].y) - e.y * (p.x - v[i].x);
        inside = inside && c >= 0;
        min_margin = std::min(min_margin, std::abs(c));
      }
      if (min_margin < 1e-6) continue;  // too close to an edge to referee
      REQUIRE(point_in_polygon(v, p) == inside);
    }
  }
}

TEST_CASE("objects_in_region uses centers of draggable objects") {
  Scene s({circle(1, {25, 25}, 5), circle(2, {100, 100}, 5), circle(3, {10, 10}, 5, 0, false),
           circle(4, {52, 25}, 5)});
  const PolygonRegion square{{{0, 0}, {50, 0}, {50, 50}, {0, 50}}};
  CHECK(objects_in_region(s, square) == ObjectIdSet{ObjectId{1}});
  CHECK(objects_in_region(s, RectRegion{{60, 60}, {0, 0}}) ==
        ObjectIdSet{ObjectId{1}, ObjectId{4}});
}
