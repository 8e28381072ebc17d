#include "tapdrag/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "tapdrag/gesture_integrator.hpp"
#include "tapdrag/text_format.hpp"

namespace tapdrag {

namespace {

std::uint64_t percentile(const std::vector<std::uint64_t>& sorted, double p) {
  if (sorted.empty()) return 0;
  // Nearest rank.
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

class TraceBuilder {
 public:
  TraceBuilder(const EngineConfig& config, std::uint64_t seed) : config_(config), rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

  Point2 clamp(Point2 p) const {
    return {std::clamp(p.x, 0.0, config_.display.width_mm),
            std::clamp(p.y, 0.0, config_.display.height_mm)};
  }
  Point2 random_point() {
    return {uniform() * config_.display.width_mm, uniform() * config_.display.height_mm};
  }

  void emit(std::uint32_t id, Phase phase, Point2 p) {
    events_.push_back({now_, TouchId{id}, phase, clamp(p)});
    now_ += 10.0;
  }

  std::vector<TouchEvent>& events() { return events_; }

 private:
  EngineConfig config_;
  std::mt19937_64 rng_;
  std::vector<TouchEvent> events_;
  double now_ = 0.0;
};

}  // namespace

BenchReport run_bench(std::span<const TouchEvent> events, const Scene& scene,
                      const EngineConfig& config, int repeats) {
  using clock = std::chrono::steady_clock;
  BenchReport report;
  std::vector<std::uint64_t> latencies;
  latencies.reserve(events.size() * static_cast<std::size_t>(std::max(repeats, 0)));
  std::vector<GestureEvent> out;
  out.reserve(16);

  const auto wall_start = clock::now();
  for (int r = 0; r < repeats; ++r) {
    RecognizerSession session(scene, config);
    for (const TouchEvent& e : events) {
      out.clear();
      const auto t0 = clock::now();
      session.process_event(e, out);
      const auto t1 = clock::now();
      latencies.push_back(static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
  }
  const auto wall_end = clock::now();

  report.events_processed = latencies.size();
  report.wall_time_s = std::chrono::duration<double>(wall_end - wall_start).count();
  report.events_per_second =
      report.wall_time_s > 0.0 ? static_cast<double>(report.events_processed) / report.wall_time_s : 0.0;
  std::sort(latencies.begin(), latencies.end());
  report.latency_p50_ns = percentile(latencies, 0.50);
  report.latency_p99_ns = percentile(latencies, 0.99);
  report.latency_max_ns = latencies.empty() ? 0 : latencies.back();
  return report;
}

std::string format_bench_report(const BenchReport& r) {
  std::string out;
  out += "events_processed " + std::to_string(r.events_processed) + '\n';
  out += "wall_time_s " + text::fixed(r.wall_time_s, 6) + '\n';
  out += "events_per_second " + text::fixed(r.events_per_second, 0) + '\n';
  out += "latency_p50_ns " + std::to_string(r.latency_p50_ns) + '\n';
  out += "latency_p99_ns " + std::to_string(r.latency_p99_ns) + '\n';
  out += "latency_max_ns " + std::to_string(r.latency_max_ns) + '\n';
  return out;
}

Scene demo_scene(const EngineConfig& config) {
  Scene scene;
  const double w = config.display.width_mm;
  const double h = config.display.height_mm;
  std::int64_t id = 1;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 5; ++col) {
      SceneObject o;
      o.id = ObjectId{id};
      o.center = {w * (col + 0.5) / 5.0, h * (row + 0.5) / 3.0};
      if ((row + col) % 2 == 0) {
        o.shape = Rectangle{0.6 * w / 5.0, 0.5 * h / 3.0};
      } else {
        o.shape = Circle{0.2 * h / 3.0};
      }
      o.z = static_cast<int>(id % 4);
      scene.add(o);
      ++id;
    }
  }
  return scene;
}

std::vector<TouchEvent> make_synthetic_trace(std::size_t min_events, std::uint64_t seed,
                                             const EngineConfig& config) {
  TraceBuilder b(config, seed);
  const Scene scene = demo_scene(config);
  const auto objects = scene.objects();
  auto object_point = [&] { return objects[b.pick(objects.size())].center; };

  while (b.events().size() < min_events) {
    switch (b.pick(5)) {
      case 0: {  // TapDrag commit, with a slider-style adjustment
        const Point2 source = object_point();
        const Point2 target = b.random_point();
        b.emit(1, Phase::down, source);
        b.emit(2, Phase::down, target);
        for (int i = 1; i <= 4; ++i) b.emit(2, Phase::move, target + Vector2{2.0 * i, 0.0});
        b.emit(1, Phase::up, source);
        b.emit(2, Phase::up, target + Vector2{8.0, 0.0});
        break;
      }
      case 1: {  // TapDrag retarget then cancel
        const Point2 source = object_point();
        b.emit(1, Phase::down, source);
        for (int k = 0; k < 2; ++k) {
          const Point2 target = b.random_point();
          b.emit(2, Phase::down, target);
          b.emit(2, Phase::up, target);
        }
        b.emit(1, Phase::up, source);
        break;
      }
      case 2: {  // one-finger drag
        const Point2 from = object_point();
        const Point2 to = b.random_point();
        b.emit(1, Phase::down, from);
        for (int i = 1; i <= 16; ++i) b.emit(1, Phase::move, from + (i / 16.0) * (to - from));
        b.emit(1, Phase::up, to);
        break;
      }
      case 3: {  // pinch-rotate on one object
        const Point2 c = object_point();
        b.emit(1, Phase::down, c);
        b.emit(2, Phase::down, c + Vector2{8.0, 0.0});
        Point2 last = c + Vector2{8.0, 0.0};
        for (int i = 1; i <= 12; ++i) {
          const double a = i * std::numbers::pi / 24.0;
          last = c + Vector2{(8.0 + i) * std::cos(a), (8.0 + i) * std::sin(a)};
          b.emit(2, Phase::move, last);
        }
        b.emit(2, Phase::up, last);
        b.emit(1, Phase::up, c);
        break;
      }
      default: {  // lasso from the background
        const Point2 anchor = b.random_point();
        b.emit(1, Phase::down, anchor);
        for (int k = 0; k < 3; ++k) {
          const Point2 v = b.random_point();
          b.emit(2, Phase::down, v);
          b.emit(2, Phase::up, v);
        }
        b.emit(1, Phase::up, anchor);
        break;
      }
    }
  }
  return std::move(b.events());
}

}  // namespace tapdrag
