#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag {

struct BenchReport {
  std::uint64_t events_processed = 0;
  double wall_time_s = 0.0;
  double events_per_second = 0.0;
  std::uint64_t latency_p50_ns = 0;
  std::uint64_t latency_p99_ns = 0;
  std::uint64_t latency_max_ns = 0;
};

// Processes `events` `repeats` times, each pass against a fresh session built
// from `scene`. Latency is measured around every process_event call.
BenchReport run_bench(std::span<const TouchEvent> events, const Scene& scene,
                      const EngineConfig& config, int repeats);

std::string format_bench_report(const BenchReport& report);

// A photo-table scene: a grid of rectangles and circles with mixed z.
Scene demo_scene(const EngineConfig& config);

// A well-formed stream of at least `min_events` events cycling through
// TapDrag commits and cancels, one-finger drags, pinches and lassos over
// demo_scene. Deterministic in `seed`.
std::vector<TouchEvent> make_synthetic_trace(std::size_t min_events, std::uint64_t seed,
                                             const EngineConfig& config);

}  // namespace tapdrag
