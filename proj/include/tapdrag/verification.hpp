#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag::verify {

// Three non-overlapping 35 mm circles on a 600 x 300 mm canvas plus nine
// background points left of, right of, above and below them.
struct MicroScene {
  Scene scene;
  std::vector<Point2> palette;
  EngineConfig config;
};

MicroScene micro_scene();

class UnsupportedStream : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Final scene of a down/up-only stream under the FIG8 policy, computed by
// reading the TapDrag rules directly off the touch ordering rather than by
// running the recognizer. Throws UnsupportedStream for streams with moves.
Scene oracle_final_scene(std::span<const TouchEvent> events, Scene scene,
                         const EngineConfig& config);

struct Finding {
  std::string kind;
  std::string detail;
  std::size_t stream_index = 0;
  std::uint64_t stream_seed = 0;
  EngineConfig config;
  Scene scene;
  std::vector<TouchEvent> reproducer;
};

struct FuzzReport {
  std::uint64_t streams_run = 0;
  std::vector<Finding> violations;
  std::vector<Finding> mismatches;

  bool passed() const { return violations.empty() && mismatches.empty(); }
};

struct StreamVerdict {
  std::string kind;
  std::string detail;
};

// Runs one complete well-formed stream through a session and checks every
// recognizer invariant after every event, plus replay determinism. Returns
// the first violation.
std::optional<StreamVerdict> check_stream(std::span<const TouchEvent> events, const Scene& scene,
                                          const EngineConfig& config);

// Every complete well-formed stream of at most `max_events` down/up events
// whose touches land on the object centers or palette points. Touch ids are
// assigned in order of first contact.
std::vector<std::vector<TouchEvent>> enumerate_streams(int max_events, const MicroScene& micro);

// Runs each enumerated stream through the recognizer (FIG8) and the oracle
// and records disagreements and invariant violations. max_events <= 8.
FuzzReport enumerate_and_check(int max_events, const MicroScene& micro,
                               const EngineConfig& config);

struct StreamOptions {
  // Keep every move within 0.9 x slop of its touch's down point.
  bool sub_slop = false;
  int max_concurrent = 4;
  int max_touches = 8;
};

// Scene used for random streams: overlapping, rotated and non-draggable
// objects on the default display.
Scene fuzz_scene(const EngineConfig& config);

std::vector<TouchEvent> random_stream(std::uint64_t seed, const Scene& scene,
                                      const EngineConfig& config, const StreamOptions& options);

// Greedy reduction: drops whole touch lifecycles, then single moves, while
// `still_fails` holds. The result is well-formed whenever the input is.
std::vector<TouchEvent> minimize(std::vector<TouchEvent> events,
                                 const std::function<bool(std::span<const TouchEvent>)>& still_fails);

// n_streams random streams alternating FIG8 and GHOST with random stacking
// rules and initial selections, each checked with check_stream.
FuzzReport fuzz(std::uint64_t seed, std::uint64_t n_streams, const EngineConfig& config);

// Sub-slop streams run under both policies; final scenes must be identical.
FuzzReport fuzz_cross_policy(std::uint64_t seed, std::uint64_t n_streams,
                             const EngineConfig& config);

// Text report. When `reproducer_dir` is set each finding's stream and scene
// are written there and the report lists the trace path.
std::string format_report(const FuzzReport& report,
                          const std::optional<std::filesystem::path>& reproducer_dir);

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace tapdrag::verify
