#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "tapdrag/text_format.hpp"
#include "tapdrag/trace_io.hpp"
#include "tapdrag/verification.hpp"

namespace tapdrag::verify {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kStepMs = 10.0;

struct Enumerator {
  int max_events;
  std::vector<Point2> positions;
  std::vector<std::vector<TouchEvent>> streams;

  std::vector<TouchEvent> prefix;
  std::vector<std::pair<TouchId, Point2>> active;
  std::uint32_t next_id = 1;

  void push(TouchId id, Phase phase, Point2 p) {
    prefix.push_back({kStepMs * static_cast<double>(prefix.size()), id, phase, p});
  }

  void run() {
    const int used = static_cast<int>(prefix.size());
    if (active.empty()) streams.push_back(prefix);
    // A new touch needs its down, its up and room to lift everyone else.
    if (used + static_cast<int>(active.size()) + 2 <= max_events) {
      for (Point2 p : positions) {
        const TouchId id{next_id++};
        push(id, Phase::down, p);
        active.emplace_back(id, p);
        run();
        active.pop_back();
        prefix.pop_back();
        --next_id;
      }
    }
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto touch = active[i];
      push(touch.first, Phase::up, touch.second);
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
      run();
      active.insert(active.begin() + static_cast<std::ptrdiff_t>(i), touch);
      prefix.pop_back();
    }
  }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

Finding make_finding(std::string kind, std::string detail, std::size_t index, std::uint64_t seed,
                     const EngineConfig& config, const Scene& scene,
                     std::vector<TouchEvent> events) {
  return {std::move(kind), std::move(detail), index, seed, config, scene, std::move(events)};
}

std::optional<StreamVerdict> cross_policy_verdict(std::span<const TouchEvent> events,
                                                  const Scene& scene, EngineConfig config) {
  config.policy = Policy::fig8;
  const ReplayResult a = replay(events, scene, config);
  config.policy = Policy::ghost;
  const ReplayResult b = replay(events, scene, config);
  if (a.final_scene != b.final_scene) {
    return StreamVerdict{"cross_policy", "final scenes differ between FIG8 and GHOST"};
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

std::vector<std::vector<TouchEvent>> enumerate_streams(int max_events, const MicroScene& micro) {
  Enumerator e{max_events, {}, {}, {}, {}, 1};
  for (const SceneObject& o : micro.scene.objects()) e.positions.push_back(o.center);
  e.positions.insert(e.positions.end(), micro.palette.begin(), micro.palette.end());
  e.run();
  return std::move(e.streams);
}

FuzzReport enumerate_and_check(int max_events, const MicroScene& micro,
                               const EngineConfig& config) {
  if (max_events < 0 || max_events > 8) {
    throw std::invalid_argument("max_events must be in [0, 8]");
  }
  EngineConfig cfg = config;
  cfg.display = micro.config.display;
  cfg.policy = Policy::fig8;

  FuzzReport report;
  const auto streams = enumerate_streams(max_events, micro);
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& s = streams[i];
    ++report.streams_run;
    if (auto v = check_stream(s, micro.scene, cfg)) {
      report.violations.push_back(make_finding(v->kind, v->detail, i, 0, cfg, micro.scene, s));
      continue;
    }
    const Scene expected = oracle_final_scene(s, micro.scene, cfg);
    const Scene actual = replay(s, micro.scene, cfg).final_scene;
    if (expected != actual) {
      report.mismatches.push_back(make_finding("oracle_mismatch",
                                               "recognizer final scene differs from oracle", i, 0,
                                               cfg, micro.scene, s));
    }
  }
  return report;
}

Scene fuzz_scene(const EngineConfig& config) {
  (void)config;
  Scene scene;
  auto add = [&](std::int64_t id, Point2 c, Shape shape, double rotation, int z, bool draggable) {
    SceneObject o;
    o.id = ObjectId{id};
    o.center = c;
    o.shape = shape;
    o.rotation = rotation;
    o.z = z;
    o.draggable = draggable;
    scene.add(o);
  };
  add(1, {150.0, 150.0}, Circle{17.5}, 0.0, 0, true);
  add(2, {300.0, 150.0}, Circle{17.5}, 0.0, 0, true);
  add(3, {500.0, 200.0}, Rectangle{120.0, 80.0}, 0.3, 2, true);
  add(4, {520.0, 220.0}, Circle{25.0}, 0.0, 1, true);  // under 3
  add(5, {350.0, 320.0}, Rectangle{100.0, 40.0}, 0.0, 3, false);
  add(6, {200.0, 300.0}, Circle{20.0}, 0.0, 1, true);
  return scene;
}

std::vector<TouchEvent> random_stream(std::uint64_t seed, const Scene& scene,
                                      const EngineConfig& config, const StreamOptions& options) {
  Rng rng(seed);
  const DisplaySize d = config.display;
  auto clamp = [&](Point2 p) {
    return Point2{std::clamp(p.x, 0.0, d.width_mm), std::clamp(p.y, 0.0, d.height_mm)};
  };

  struct Active {
    TouchId id;
    Point2 down;
    Point2 now;
  };
  std::vector<Active> active;
  std::vector<Point2> used;
  std::vector<TouchEvent> events;
  double t = 0.0;
  int budget = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(options.max_touches)));
  const auto objects = scene.objects();

  auto pick_point = [&]() -> Point2 {
    const double r = rng.uniform(0.0, 1.0);
    if (r < 0.5 && !objects.empty()) {
      const Point2 c = objects[rng.below(objects.size())].center;
      if (rng.chance(0.5)) return c;
      return clamp(c + Vector2{rng.uniform(-12.0, 12.0), rng.uniform(-12.0, 12.0)});
    }
    if (r < 0.65 && !used.empty()) return used[rng.below(used.size())];
    return {rng.uniform(0.0, d.width_mm), rng.uniform(0.0, d.height_mm)};
  };

  while (budget > 0 || !active.empty()) {
    const bool can_down =
        budget > 0 && static_cast<int>(active.size()) < options.max_concurrent;
    const std::uint64_t w_down = can_down ? 3 : 0;
    const std::uint64_t w_move = active.empty() ? 0 : 5;
    const std::uint64_t w_up = active.empty() ? 0 : 2;
    const std::uint64_t roll = rng.below(w_down + w_move + w_up);
    t += static_cast<double>(rng.below(16));

    if (roll < w_down) {
      std::vector<std::uint32_t> free_ids;
      for (std::uint32_t id = 1; id <= 6; ++id) {
        if (std::none_of(active.begin(), active.end(),
                         [&](const Active& a) { return to_underlying(a.id) == id; })) {
          free_ids.push_back(id);
        }
      }
      const TouchId id{free_ids[rng.below(free_ids.size())]};
      const Point2 p = pick_point();
      used.push_back(p);
      active.push_back({id, p, p});
      events.push_back({t, id, Phase::down, p});
      --budget;
    } else if (roll < w_down + w_move) {
      Active& a = active[rng.below(active.size())];
      Point2 next;
      if (options.sub_slop) {
        const double radius = 0.9 * config.slop_radius * std::sqrt(rng.uniform(0.0, 1.0));
        const double angle = rng.uniform(-3.14159, 3.14159);
        next = clamp(a.down + Vector2{radius * std::cos(angle), radius * std::sin(angle)});
      } else {
        const double r = rng.uniform(0.0, 1.0);
        const double step = r < 0.5 ? 3.0 : (r < 0.85 ? 15.0 : 0.0);
        next = step > 0.0
                   ? clamp(a.now + Vector2{rng.uniform(-step, step), rng.uniform(-step, step)})
                   : pick_point();
      }
      a.now = next;
      events.push_back({t, a.id, Phase::move, next});
    } else {
      const std::size_t i = rng.below(active.size());
      events.push_back({t, active[i].id, Phase::up, active[i].now});
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  return events;
}

std::vector<TouchEvent> minimize(std::vector<TouchEvent> events,
                                 const std::function<bool(std::span<const TouchEvent>)>& still_fails) {
  auto without = [](const std::vector<TouchEvent>& src, const std::vector<bool>& drop) {
    std::vector<TouchEvent> out;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!drop[i]) out.push_back(src[i]);
    }
    return out;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    // Whole lifecycles first: a down and everything up to its matching up.
    for (std::size_t start = 0; start < events.size(); ++start) {
      if (events[start].phase != Phase::down) continue;
      std::vector<bool> drop(events.size(), false);
      const TouchId id = events[start].touch_id;
      for (std::size_t j = start; j < events.size(); ++j) {
        if (events[j].touch_id != id) continue;
        drop[j] = true;
        if (events[j].phase == Phase::up) break;
      }
      auto candidate = without(events, drop);
      if (still_fails(candidate)) {
        events = std::move(candidate);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].phase != Phase::move) continue;
      std::vector<bool> drop(events.size(), false);
      drop[i] = true;
      auto candidate = without(events, drop);
      if (still_fails(candidate)) {
        events = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return events;
}

FuzzReport fuzz(std::uint64_t seed, std::uint64_t n_streams, const EngineConfig& config) {
  FuzzReport report;
  const Scene base = fuzz_scene(config);
  const StreamOptions options;
  for (std::uint64_t i = 0; i < n_streams; ++i) {
    const std::uint64_t s = stream_seed(seed, i);
    Rng rng(splitmix64(s));
    EngineConfig cfg = config;
    cfg.policy = (i % 2 == 0) ? Policy::fig8 : Policy::ghost;
    cfg.stacking_rule = rng.chance(0.5) ? StackingRule::tapdrag_on_object_target
                                        : StackingRule::reject_object_target;
    Scene scene = base;
    ObjectIdSet selection;
    for (const SceneObject& o : base.objects()) {
      if (rng.chance(0.3)) selection.insert(o.id);
    }
    scene.set_selection(selection);

    const auto events = random_stream(s, scene, cfg, options);
    ++report.streams_run;
    if (auto v = check_stream(events, scene, cfg)) {
      const std::string kind = v->kind;
      auto small = minimize(events, [&](std::span<const TouchEvent> candidate) {
        auto again = check_stream(candidate, scene, cfg);
        return again && again->kind == kind;
      });
      const auto detail = check_stream(small, scene, cfg).value_or(*v).detail;
      report.violations.push_back(
          make_finding(kind, detail, static_cast<std::size_t>(i), s, cfg, scene, std::move(small)));
    }
  }
  return report;
}

FuzzReport fuzz_cross_policy(std::uint64_t seed, std::uint64_t n_streams,
                             const EngineConfig& config) {
  FuzzReport report;
  const Scene base = fuzz_scene(config);
  StreamOptions options;
  options.sub_slop = true;
  for (std::uint64_t i = 0; i < n_streams; ++i) {
    const std::uint64_t s = stream_seed(seed, i);
    Rng rng(splitmix64(s));
    EngineConfig cfg = config;
    cfg.stacking_rule = rng.chance(0.5) ? StackingRule::tapdrag_on_object_target
                                        : StackingRule::reject_object_target;
    Scene scene = base;
    ObjectIdSet selection;
    for (const SceneObject& o : base.objects()) {
      if (rng.chance(0.3)) selection.insert(o.id);
    }
    scene.set_selection(selection);

    const auto events = random_stream(s, scene, cfg, options);
    ++report.streams_run;
    std::optional<StreamVerdict> v;
    for (Policy p : {Policy::fig8, Policy::ghost}) {
      cfg.policy = p;
      if ((v = check_stream(events, scene, cfg))) {
        report.violations.push_back(
            make_finding(v->kind, v->detail, static_cast<std::size_t>(i), s, cfg, scene, events));
        break;
      }
    }
    if (v) continue;
    if (auto d = cross_policy_verdict(events, scene, cfg)) {
      auto small = minimize(events, [&](std::span<const TouchEvent> candidate) {
        return cross_policy_verdict(candidate, scene, cfg).has_value();
      });
      report.mismatches.push_back(make_finding(d->kind, d->detail, static_cast<std::size_t>(i), s,
                                               cfg, scene, std::move(small)));
    }
  }
  return report;
}

std::string format_report(const FuzzReport& report,
                          const std::optional<std::filesystem::path>& reproducer_dir) {
  std::string out;
  out += "streams_run " + std::to_string(report.streams_run) + '\n';
  out += "violations " + std::to_string(report.violations.size()) + '\n';
  out += "mismatches " + std::to_string(report.mismatches.size()) + '\n';

  std::size_t n = 0;
  auto emit = [&](const Finding& f) {
    std::string where = "-";
    if (reproducer_dir) {
      std::filesystem::create_directories(*reproducer_dir);
      const std::string stem = "finding_" + std::to_string(n);
      TraceFile trace;
      trace.display = f.config.display;
      trace.dpi = f.config.dpi;
      trace.config = {{"policy", std::string(to_string(f.config.policy))},
                      {"stacking", f.config.stacking_rule == StackingRule::reject_object_target
                                       ? "off"
                                       : "on"},
                      {"slop", text::fixed(f.config.slop_radius, 3)}};
      trace.events = f.reproducer;
      const auto trace_path = *reproducer_dir / (stem + ".trace");
      std::ofstream(trace_path) << serialize_trace(trace);
      std::ofstream(*reproducer_dir / (stem + ".scene")) << serialize_scene(f.scene);
      where = trace_path.string();
    }
    ++n;
    out += f.kind + " stream=" + std::to_string(f.stream_index) +
           " seed=" + std::to_string(f.stream_seed) +
           " policy=" + std::string(to_string(f.config.policy)) +
           " events=" + std::to_string(f.reproducer.size()) + " reproducer=" + where + '\n';
    out += "  " + f.detail + '\n';
  };
  for (const Finding& f : report.violations) emit(f);
  for (const Finding& f : report.mismatches) emit(f);
  return out;
}

}  // namespace tapdrag::verify
