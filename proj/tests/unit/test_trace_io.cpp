#include <doctest.h>

#include "tapdrag/bench.hpp"
#include "tapdrag/trace_io.hpp"
#include "tapdrag/verification.hpp"

using namespace tapdrag;

namespace {

std::string reason_of(std::string_view text) {
  try {
    parse_trace(text);
  } catch (const ParseError& e) {
    return std::to_string(e.line()) + ":" + e.reason();
  }
  return "ok";
}

// Quantize to what 3-digit, integer-millisecond text can carry.
std::vector<TouchEvent> quantized(std::vector<TouchEvent> events) {
  for (auto& e : events) {
    e.timestamp_ms = std::round(e.timestamp_ms);
    e.position = {std::round(e.position.x * 1000) / 1000, std::round(e.position.y * 1000) / 1000};
  }
  return events;
}

}  // namespace

TEST_CASE("parse a minimal trace") {
  const auto t = parse_trace("#display 708 398\n0 1 d 100.000 100.000\n50 1 u 100.000 100.000\n");
  CHECK(t.display == DisplaySize{708, 398});
  REQUIRE(t.events.size() == 2);
  CHECK(t.events[1] == TouchEvent{50, TouchId{1}, Phase::up, {100, 100}});
}

TEST_CASE("parse errors carry line and reason") {
  CHECK(reason_of("0 1 x 0 0\n") == "1:bad_phase");
  CHECK(reason_of("# comment\n0 1 d 0\n") == "2:field_count");
  CHECK(reason_of("zz 1 d 0 0\n") == "1:bad_timestamp");
  CHECK(reason_of("0 -1 d 0 0\n") == "1:bad_touch_id");
  CHECK(reason_of("0 1 d nan 0\n") == "1:bad_coordinate");
  CHECK(reason_of("#display 1\n") == "1:bad_header");
  CHECK(reason_of("#config policy=maybe\n") == "1:bad_config");
  CHECK(reason_of("\n\n# note\n") == "ok");
}

TEST_CASE("config headers and precedence") {
  const auto t = parse_trace("#display 600 300\n#dpi 120\n#config policy=ghost\n#config slop=3.5\n"
                             "#config stacking=off\n");
  const auto c = config_from_trace(t);
  CHECK(c.display == DisplaySize{600, 300});
  CHECK(c.dpi == 120);
  CHECK(c.policy == Policy::ghost);
  CHECK(c.slop_radius == 3.5);
  CHECK(c.stacking_rule == StackingRule::reject_object_target);
}

TEST_CASE("trace round trip over generated streams") {
  const EngineConfig cfg;
  const Scene scene = verify::fuzz_scene(cfg);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    TraceFile t;
    t.display = cfg.display;
    t.config = {{"policy", "ghost"}};
    t.events = quantized(verify::random_stream(seed, scene, cfg, {}));
    const std::string text = serialize_trace(t);
    const TraceFile back = parse_trace(text);
    REQUIRE(back == t);
    REQUIRE(serialize_trace(back) == text);
    REQUIRE_FALSE(validate_stream(back.events, cfg).has_value());
  }
}

TEST_CASE("gesture log round trip over replayed streams") {
  EngineConfig cfg;
  const Scene scene = verify::fuzz_scene(cfg);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    cfg.policy = seed % 2 ? Policy::ghost : Policy::fig8;
    const auto events = quantized(verify::random_stream(seed, scene, cfg, {}));
    const auto result = replay(events, scene, cfg);
    const std::string text = serialize_gesture_log(result.log);
    REQUIRE(serialize_gesture_log(parse_gesture_log(text)) == text);
  }
}

TEST_CASE("every event kind formats and parses") {
  const std::vector<LogEntry> log = {
      {0, SourceAcquired{ObjectId{3}}},
      {1, PreviewMoved{ObjectId{3}, {1.5, -2.25}}},
      {2, Committed{{ObjectId{1}, ObjectId{3}}, {10, 0}}},
      {3, Reverted{ObjectId{3}, {4, 5}}},
      {4, Aborted{ObjectId{3}}},
      {5, SelectionPreview{RectRegion{{0, 0}, {1, 2}}}},
      {6, SelectionPreview{PolygonRegion{{{0, 0}, {1, 0}, {1, 1}}}}},
      {7, SelectionChanged{{}}},
      {8, SelectionChanged{{ObjectId{2}}}},
      {9, BackgroundTap{}},
      {10, DragStarted{ObjectId{1}}},
      {11, DragMoved{ObjectId{1}, {7, 8}}},
      {12, Dropped{ObjectId{1}, {7, 8}}},
      {13, ManipulationUpdated{ObjectId{1}, {2, 0.5, {3, 4}}}},
      {14, GhostShown{ObjectId{1}, {9, 9}}},
      {15, GhostResolved{GhostResolution::manipulation}},
      {16, RubberBandChanged{RectRegion{{1, 1}, {5, 5}}}},
  };
  const std::string text = serialize_gesture_log(log);
  CHECK(parse_gesture_log(text) == log);
  CHECK(format_log_line(log[2]) == "2 COMMITTED dx=10.000 dy=0.000 objects=1,3");
  CHECK(format_log_line(log[1]) == "1 PREVIEW_MOVED object=3 x=1.500 y=-2.250");
  CHECK(format_log_line(log[7]) == "7 SELECTION_CHANGED ids=");
}

TEST_CASE("negative zero prints without a sign") {
  const LogEntry e{0, PreviewMoved{ObjectId{1}, {-0.0001, 0}}};
  CHECK(format_log_line(e) == "0 PREVIEW_MOVED object=1 x=0.000 y=0.000");
}

TEST_CASE("scene snapshot round trip") {
  const Scene s = verify::fuzz_scene({});
  CHECK(parse_scene(serialize_scene(s)) == s);
  // Six decimals cannot carry every double; the text form is still a fixed point.
  const std::string once = serialize_scene(demo_scene({}));
  CHECK(serialize_scene(parse_scene(once)) == once);
  CHECK_THROWS_AS(parse_scene("1 0 hexagon 1 2 3 0 1 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_scene("1 0 circle 1 2 3 0 1 1 0\n1 0 circle 1 2 3 0 1 1 0\n"), ParseError);
}

TEST_CASE("replay: empty trace leaves the scene alone; runs are identical") {
  const Scene s = demo_scene({});
  const auto empty = replay({}, s, {});
  CHECK(empty.log.empty());
  CHECK(empty.final_scene == s);
  const auto events = make_synthetic_trace(500, 9, {});
  const auto a = replay(events, s, {});
  const auto b = replay(events, s, {});
  CHECK(serialize_gesture_log(a.log) == serialize_gesture_log(b.log));
  CHECK(a.final_scene == b.final_scene);
}
