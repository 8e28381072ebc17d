#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "tapdrag/core_types.hpp"

using namespace tapdrag;

namespace {
TouchEvent ev(double t, std::uint32_t id, Phase ph, double x = 10, double y = 10) {
  return {t, TouchId{id}, ph, {x, y}};
}
}  // namespace

TEST_CASE("well-formed stream is accepted") {
  const std::vector<TouchEvent> s = {ev(0, 1, Phase::down), ev(5, 1, Phase::move, 12, 10),
                                     ev(5, 2, Phase::down), ev(9, 2, Phase::up),
                                     ev(10, 1, Phase::up)};
  CHECK_FALSE(validate_stream(s, {}).has_value());
  CHECK_FALSE(validate_stream({}, {}).has_value());
}

TEST_CASE("stream errors carry index and kind") {
  const EngineConfig cfg;
  SUBCASE("move before down") {
    const std::vector<TouchEvent> s = {ev(0, 1, Phase::move)};
    CHECK(validate_stream(s, cfg) == StreamError{0, StreamErrorKind::phase_order});
  }
  SUBCASE("duplicate down") {
    const std::vector<TouchEvent> s = {ev(0, 1, Phase::down), ev(1, 1, Phase::down)};
    CHECK(validate_stream(s, cfg) == StreamError{1, StreamErrorKind::duplicate_down});
  }
  SUBCASE("up without down") {
    const std::vector<TouchEvent> s = {ev(0, 3, Phase::up)};
    CHECK(validate_stream(s, cfg) == StreamError{0, StreamErrorKind::up_without_down});
  }
  SUBCASE("time regression") {
    const std::vector<TouchEvent> s = {ev(10, 1, Phase::down), ev(9, 1, Phase::up)};
    CHECK(validate_stream(s, cfg) == StreamError{1, StreamErrorKind::time_regression});
  }
  SUBCASE("out of bounds, edges inclusive") {
    std::vector<TouchEvent> s = {ev(0, 1, Phase::down, 708, 398), ev(1, 1, Phase::up, 708, 398)};
    CHECK_FALSE(validate_stream(s, cfg).has_value());
    s[1].position.x = 708.001;
    CHECK(validate_stream(s, cfg) == StreamError{1, StreamErrorKind::out_of_bounds});
  }
  SUBCASE("touch left down is reported at its down") {
    const std::vector<TouchEvent> s = {ev(0, 1, Phase::down), ev(1, 2, Phase::down),
                                       ev(2, 1, Phase::up)};
    CHECK(validate_stream(s, cfg) == StreamError{1, StreamErrorKind::phase_order});
  }
  SUBCASE("id may be reused after lifting") {
    const std::vector<TouchEvent> s = {ev(0, 1, Phase::down), ev(1, 1, Phase::up),
                                       ev(2, 1, Phase::down), ev(3, 1, Phase::up)};
    CHECK_FALSE(validate_stream(s, cfg).has_value());
  }
}

TEST_CASE("validator rejects without changing state") {
  StreamValidator v(DisplaySize{});
  REQUIRE_FALSE(v.accept(ev(0, 1, Phase::down)));
  CHECK(v.accept(ev(1, 1, Phase::down)).has_value());
  CHECK(v.events_seen() == 1);
  CHECK(v.is_down(TouchId{1}));
  CHECK_FALSE(v.accept(ev(1, 1, Phase::up)));
  CHECK_FALSE(v.finish());
}

TEST_CASE("config validation") {
  EngineConfig c;
  CHECK_NOTHROW(validate_config(c));
  c.slop_radius = 0;
  CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
  c = {};
  c.display.width_mm = -1;
  CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
  c = {};
  c.dpi = 0;
  CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
  CHECK(EngineConfig{}.mm_per_px() == doctest::Approx(25.4 / 96.0));
}

TEST_CASE("vector arithmetic") {
  const Point2 a{1, 2}, b{4, 6};
  CHECK(distance(a, b) == 5.0);
  CHECK(midpoint(a, b) == Point2{2.5, 4});
  CHECK(a + (b - a) == b);
}
