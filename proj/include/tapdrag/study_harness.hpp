#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapdrag/core_types.hpp"
#include "tapdrag/scene.hpp"

namespace tapdrag::study {

enum class Technique : std::uint8_t { tapdrag, traditional };
enum class SourceArea : std::uint8_t { left_half, right_half };
enum class Distance : std::uint8_t { short_drag, long_drag };
enum class Direction : std::uint8_t { up, down, left, right };

inline constexpr double kShortDistanceMm = 100.0;
inline constexpr double kLongDistanceMm = 550.0;
inline constexpr double kObjectDiameterMm = 35.0;
inline constexpr int kShortCells = 32;
inline constexpr int kLongCells = 8;
// Source coordinates are drawn on this grid so that source + distance is
// exact in binary floating point and survives 3-digit text output.
inline constexpr double kPositionGridMm = 0.125;

double distance_mm(Distance d);
std::string_view to_string(Technique t);
std::string_view to_string(SourceArea a);
std::string_view to_string(Direction d);

struct TrialSpec {
  int index = 0;
  Technique technique = Technique::tapdrag;
  bool target_visible = true;
  SourceArea source_area = SourceArea::left_half;
  Distance distance = Distance::short_drag;
  Direction direction = Direction::right;
  Point2 source;
  Point2 target;
  double object_diameter = kObjectDiameterMm;

  friend bool operator==(const TrialSpec&, const TrialSpec&) = default;
};

struct TrialLog {
  int trial_index = 0;
  double start_ms = 0.0;
  double end_ms = 0.0;
  Point2 drop_point;
  std::vector<TouchEvent> events;
};

struct TrialResult {
  int trial_index = 0;
  double completion_time_s = 0.0;
  bool passed = false;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct StudyConfig {
  std::uint64_t seed = 0;
  int trials_per_cell = 10;
  double margin_mm = 50.0;
  DisplaySize display;
  double tolerance_radius_mm = 17.5;
};

class StudyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One participant's session: every short cell (technique x visibility x area
// x direction) and every long cell (technique x visibility x area, direction
// forced horizontal away from the source half) repeated trials_per_cell
// times, with positions randomized inside the legal band and the order
// shuffled. Fully determined by cfg.seed. Throws StudyError
// ("display_too_small") when the long drag cannot fit inside the margins.
std::vector<TrialSpec> generate_session(const StudyConfig& cfg);

// `participants` sessions with per-participant seeds split from cfg.seed.
// Indices run consecutively across participants.
std::vector<TrialSpec> generate_study(const StudyConfig& cfg, int participants);

// Returns an empty string when the spec satisfies every trial invariant for
// the given config, else a description of the first violation.
std::string check_trial(const TrialSpec& spec, const StudyConfig& cfg);

// completion = (end - start) / 1000 s; passes iff the drop lies within
// tolerance_radius_mm of the target, boundary included. Throws StudyError
// ("mismatched_trial") when the log is for another trial and
// std::invalid_argument when end <= start.
TrialResult evaluate_trial(const TrialSpec& spec, const TrialLog& log,
                           double tolerance_radius_mm = 17.5);

// The single-object scene shown during a trial.
Scene trial_scene(const TrialSpec& spec, ObjectId object = ObjectId{1});

// An idealized performance of the trial with its technique, starting at
// start_ms. Traditional drags slide in `steps` equal moves.
std::vector<TouchEvent> synthesize_trial_events(const TrialSpec& spec, double start_ms = 0.0,
                                                int steps = 20);

// Replays events against trial_scene(spec); the drop point is where the
// object ends up.
TrialLog run_trial(const TrialSpec& spec, std::span<const TouchEvent> events,
                   const EngineConfig& config);

enum class Factor : std::uint8_t { technique, visibility, area, distance, direction };

std::optional<Factor> parse_factor(std::string_view name);
std::string_view to_string(Factor f);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct ConditionStats {
  // "factor=level" pairs joined by ';' in group_by order; "all" when
  // group_by is empty.
  std::string key;
  std::size_t n = 0;
  double mean_time_s = 0.0;
  double failure_rate = 0.0;
  FiveNumber times;
};

struct JoinedTrial {
  TrialSpec spec;
  TrialResult result;
};

// Linear-interpolation quantile (positions at p * (n - 1)) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
FiveNumber five_number_summary(std::vector<double> values);

// One ConditionStats per non-empty group, ordered by key. Throws StudyError
// ("empty_group") for empty input.
std::vector<ConditionStats> summarize(std::span<const JoinedTrial> rows,
                                      std::span<const Factor> group_by);

// CSV interchange.
//   trials:  index,technique,visible,area,distance_mm,direction,sx,sy,tx,ty
//   results: index,time_s,passed
std::string trials_to_csv(std::span<const TrialSpec> trials);
std::vector<TrialSpec> trials_from_csv(std::string_view text);
std::string results_to_csv(std::span<const TrialResult> results);
std::vector<TrialResult> results_from_csv(std::string_view text);
std::string stats_to_csv(std::span<const ConditionStats> stats);

// Pairs results with specs by trial index. Throws StudyError
// ("mismatched_trial") for a result without a spec.
std::vector<JoinedTrial> join(std::span<const TrialSpec> trials,
                              std::span<const TrialResult> results);

}  // namespace tapdrag::study
