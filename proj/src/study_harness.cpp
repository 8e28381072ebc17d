#include "tapdrag/study_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

#include "tapdrag/trace_io.hpp"
#include "tapdrag/text_format.hpp"

namespace tapdrag::study {

namespace {

// Portable bounded draw; std::uniform_int_distribution is not specified
// bit-for-bit across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector2 unit(Direction d) {
  switch (d) {
    case Direction::up: return {0.0, -1.0};
    case Direction::down: return {0.0, 1.0};
    case Direction::left: return {-1.0, 0.0};
    case Direction::right: return {1.0, 0.0};
  }
  return {};
}

struct Cell {
  Technique technique;
  bool visible;
  SourceArea area;
  Distance distance;
  Direction direction;
};

std::vector<Cell> design_cells() {
  std::vector<Cell> cells;
  for (Technique t : {Technique::tapdrag, Technique::traditional}) {
    for (bool visible : {true, false}) {
      for (SourceArea area : {SourceArea::left_half, SourceArea::right_half}) {
        for (Direction d : {Direction::up, Direction::down, Direction::left, Direction::right}) {
          cells.push_back({t, visible, area, Distance::short_drag, d});
        }
        // Long drags only fit horizontally, heading away from the source half.
        cells.push_back({t, visible, area, Distance::long_drag,
                         area == SourceArea::left_half ? Direction::right : Direction::left});
      }
    }
  }
  return cells;
}

struct GridRange {
  std::int64_t lo;
  std::int64_t hi;  // inclusive
};

struct Band {
  GridRange x;
  GridRange y;
};

Band legal_band(const Cell& cell, const StudyConfig& cfg) {
  const double g = kPositionGridMm;
  const double w = cfg.display.width_mm;
  const double h = cfg.display.height_mm;
  const double m = cfg.margin_mm;
  const double d = distance_mm(cell.distance);

  double x_lo = m, x_hi = w - m, y_lo = m, y_hi = h - m;
  switch (cell.direction) {
    case Direction::up: y_lo = m + d; break;
    case Direction::down: y_hi = h - m - d; break;
    case Direction::left: x_lo = m + d; break;
    case Direction::right: x_hi = w - m - d; break;
  }
  Band band{{static_cast<std::int64_t>(std::ceil(x_lo / g)),
             static_cast<std::int64_t>(std::floor(x_hi / g))},
            {static_cast<std::int64_t>(std::ceil(y_lo / g)),
             static_cast<std::int64_t>(std::floor(y_hi / g))}};
  // Left half is x < w/2, right half x >= w/2.
  const auto half = static_cast<std::int64_t>(std::ceil(0.5 * w / g));
  if (cell.area == SourceArea::left_half) {
    band.x.hi = std::min(band.x.hi, half - 1);
  } else {
    band.x.lo = std::max(band.x.lo, half);
  }
  if (band.x.lo > band.x.hi || band.y.lo > band.y.hi) throw StudyError("display_too_small");
  return band;
}

double draw(std::mt19937_64& rng, GridRange r) {
  const auto span = static_cast<std::uint64_t>(r.hi - r.lo + 1);
  return static_cast<double>(r.lo + static_cast<std::int64_t>(uniform_below(rng, span))) *
         kPositionGridMm;
}

std::string_view visible_str(bool v) { return v ? "1" : "0"; }

std::string level(Factor f, const TrialSpec& s) {
  switch (f) {
    case Factor::technique: return std::string(to_string(s.technique));
    case Factor::visibility: return std::string(visible_str(s.target_visible));
    case Factor::area: return std::string(to_string(s.source_area));
    case Factor::distance: return text::fixed(distance_mm(s.distance), 0);
    case Factor::direction: return std::string(to_string(s.direction));
  }
  return {};
}

[[noreturn]] void csv_error(std::size_t line, std::string_view what) {
  throw ParseError(line, std::string(what));
}

}  // namespace

double distance_mm(Distance d) {
  return d == Distance::short_drag ? kShortDistanceMm : kLongDistanceMm;
}

std::string_view to_string(Technique t) { return t == Technique::tapdrag ? "tapdrag" : "traditional"; }
std::string_view to_string(SourceArea a) { return a == SourceArea::left_half ? "left" : "right"; }
std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::left: return "left";
    case Direction::right: return "right";
  }
  return "?";
}

std::vector<TrialSpec> generate_session(const StudyConfig& cfg) {
  if (cfg.trials_per_cell <= 0) throw std::invalid_argument("trials_per_cell must be positive");
  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::vector<TrialSpec> trials;
  const auto cells = design_cells();
  trials.reserve(cells.size() * static_cast<std::size_t>(cfg.trials_per_cell));
  for (const Cell& cell : cells) {
    const Band band = legal_band(cell, cfg);
    for (int k = 0; k < cfg.trials_per_cell; ++k) {
      TrialSpec spec;
      spec.technique = cell.technique;
      spec.target_visible = cell.visible;
      spec.source_area = cell.area;
      spec.distance = cell.distance;
      spec.direction = cell.direction;
      spec.source.x = draw(rng, band.x);
      spec.source.y = draw(rng, band.y);
      spec.target = spec.source + distance_mm(cell.distance) * unit(cell.direction);
      trials.push_back(spec);
    }
  }
  for (std::size_t i = trials.size(); i > 1; --i) {
    std::swap(trials[i - 1], trials[uniform_below(rng, i)]);
  }
  for (std::size_t i = 0; i < trials.size(); ++i) trials[i].index = static_cast<int>(i);
  return trials;
}

std::vector<TrialSpec> generate_study(const StudyConfig& cfg, int participants) {
  if (participants <= 0) throw std::invalid_argument("participants must be positive");
  std::vector<TrialSpec> all;
  for (int p = 0; p < participants; ++p) {
    StudyConfig per = cfg;
    // Participant 0 reproduces generate_session(cfg) exactly.
    per.seed = p == 0 ? cfg.seed : splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(p)));
    auto session = generate_session(per);
    const int base = static_cast<int>(all.size());
    for (auto& t : session) {
      t.index += base;
      all.push_back(t);
    }
  }
  return all;
}

std::string check_trial(const TrialSpec& s, const StudyConfig& cfg) {
  const double m = cfg.margin_mm;
  const auto in_bounds = [&](Point2 p) {
    return p.x >= m && p.y >= m && p.x <= cfg.display.width_mm - m &&
           p.y <= cfg.display.height_mm - m;
  };
  if (!in_bounds(s.source)) return "source out of bounds";
  if (!in_bounds(s.target)) return "target out of bounds";
  const double half = 0.5 * cfg.display.width_mm;
  if ((s.source_area == SourceArea::left_half) != (s.source.x < half)) return "source in wrong half";
  const Vector2 d = s.target - s.source;
  const double expected = distance_mm(s.distance);
  const Vector2 want = expected * unit(s.direction);
  if (d != want) return "displacement does not match distance and direction";
  if (s.distance == Distance::long_drag) {
    const Direction forced =
        s.source_area == SourceArea::left_half ? Direction::right : Direction::left;
    if (s.direction != forced) return "long drag not heading away from its source half";
  }
  if (s.object_diameter != kObjectDiameterMm) return "wrong object diameter";
  return {};
}

TrialResult evaluate_trial(const TrialSpec& spec, const TrialLog& log, double tolerance_radius_mm) {
  if (log.trial_index != spec.index) throw StudyError("mismatched_trial");
  if (!(log.end_ms > log.start_ms)) throw std::invalid_argument("trial log must have end > start");
  TrialResult r;
  r.trial_index = spec.index;
  r.completion_time_s = (log.end_ms - log.start_ms) / 1000.0;
  r.passed = distance(log.drop_point, spec.target) <= tolerance_radius_mm;
  return r;
}

Scene trial_scene(const TrialSpec& spec, ObjectId object) {
  SceneObject o;
  o.id = object;
  o.center = spec.source;
  o.shape = Circle{0.5 * spec.object_diameter};
  return Scene({o});
}

std::vector<TouchEvent> synthesize_trial_events(const TrialSpec& spec, double start_ms, int steps) {
  const TouchId first{1};
  const TouchId second{2};
  if (spec.technique == Technique::tapdrag) {
    return {
        {start_ms, first, Phase::down, spec.source},
        {start_ms + 300.0, second, Phase::down, spec.target},
        {start_ms + 450.0, first, Phase::up, spec.source},
        {start_ms + 550.0, second, Phase::up, spec.target},
    };
  }
  std::vector<TouchEvent> events;
  events.push_back({start_ms, first, Phase::down, spec.source});
  const Vector2 delta = spec.target - spec.source;
  for (int i = 1; i <= steps; ++i) {
    const Point2 p = i == steps ? spec.target
                                : spec.source + (static_cast<double>(i) / steps) * delta;
    events.push_back({start_ms + 20.0 * i, first, Phase::move, p});
  }
  events.push_back({start_ms + 20.0 * (steps + 1), first, Phase::up, spec.target});
  return events;
}

TrialLog run_trial(const TrialSpec& spec, std::span<const TouchEvent> events,
                   const EngineConfig& config) {
  const ObjectId object{1};
  auto result = replay(events, trial_scene(spec, object), config);
  TrialLog log;
  log.trial_index = spec.index;
  if (!events.empty()) {
    log.start_ms = events.front().timestamp_ms;
    log.end_ms = events.back().timestamp_ms;
  }
  log.drop_point = result.final_scene.at(object).center;
  log.events.assign(events.begin(), events.end());
  return log;
}

std::optional<Factor> parse_factor(std::string_view name) {
  if (name == "technique") return Factor::technique;
  if (name == "visible" || name == "visibility") return Factor::visibility;
  if (name == "area") return Factor::area;
  if (name == "distance") return Factor::distance;
  if (name == "direction") return Factor::direction;
  return std::nullopt;
}

std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::technique: return "technique";
    case Factor::visibility: return "visible";
    case Factor::area: return "area";
    case Factor::distance: return "distance";
    case Factor::direction: return "direction";
  }
  return "?";
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw StudyError("empty_group");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FiveNumber five_number_summary(std::vector<double> values) {
  if (values.empty()) throw StudyError("empty_group");
  std::sort(values.begin(), values.end());
  return {values.front(), quantile_sorted(values, 0.25), quantile_sorted(values, 0.5),
          quantile_sorted(values, 0.75), values.back()};
}

std::vector<ConditionStats> summarize(std::span<const JoinedTrial> rows,
                                      std::span<const Factor> group_by) {
  if (rows.empty()) throw StudyError("empty_group");
  struct Acc {
    std::vector<double> times;
    std::size_t failures = 0;
  };
  std::map<std::string, Acc> groups;
  for (const auto& row : rows) {
    std::string key;
    for (Factor f : group_by) {
      if (!key.empty()) key += ';';
      key += to_string(f);
      key += '=';
      key += level(f, row.spec);
    }
    if (key.empty()) key = "all";
    auto& acc = groups[key];
    acc.times.push_back(row.result.completion_time_s);
    if (!row.result.passed) ++acc.failures;
  }
  std::vector<ConditionStats> out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    // Sorting first makes the mean independent of input order.
    std::sort(acc.times.begin(), acc.times.end());
    double sum = 0.0;
    for (double t : acc.times) sum += t;
    ConditionStats s;
    s.key = key;
    s.n = acc.times.size();
    s.mean_time_s = sum / static_cast<double>(s.n);
    s.failure_rate = static_cast<double>(acc.failures) / static_cast<double>(s.n);
    s.times = five_number_summary(std::move(acc.times));
    out.push_back(std::move(s));
  }
  return out;
}

std::string trials_to_csv(std::span<const TrialSpec> trials) {
  std::string out = "index,technique,visible,area,distance_mm,direction,sx,sy,tx,ty\n";
  for (const auto& t : trials) {
    out += std::to_string(t.index);
    out += ',';
    out += to_string(t.technique);
    out += ',';
    out += visible_str(t.target_visible);
    out += ',';
    out += to_string(t.source_area);
    out += ',';
    out += text::fixed(distance_mm(t.distance), 0);
    out += ',';
    out += to_string(t.direction);
    for (double v : {t.source.x, t.source.y, t.target.x, t.target.y}) {
      out += ',';
      text::append_fixed(out, v, 3);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrialSpec> trials_from_csv(std::string_view csv) {
  const auto all = text::lines(csv);
  if (all.empty() || all.front() != "index,technique,visible,area,distance_mm,direction,sx,sy,tx,ty") {
    csv_error(1, "bad_header");
  }
  std::vector<TrialSpec> trials;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t n = i + 1;
    if (all[i].empty()) continue;
    const auto f = text::split(all[i], ',');
    if (f.size() != 10) csv_error(n, "field_count");
    TrialSpec t;
    const auto index = text::parse_int(f[0]);
    if (!index) csv_error(n, "bad_index");
    t.index = static_cast<int>(*index);
    if (f[1] == "tapdrag") {
      t.technique = Technique::tapdrag;
    } else if (f[1] == "traditional") {
      t.technique = Technique::traditional;
    } else {
      csv_error(n, "bad_technique");
    }
    if (f[2] != "0" && f[2] != "1") csv_error(n, "bad_visible");
    t.target_visible = f[2] == "1";
    if (f[3] == "left") {
      t.source_area = SourceArea::left_half;
    } else if (f[3] == "right") {
      t.source_area = SourceArea::right_half;
    } else {
      csv_error(n, "bad_area");
    }
    if (f[4] == "100") {
      t.distance = Distance::short_drag;
    } else if (f[4] == "550") {
      t.distance = Distance::long_drag;
    } else {
      csv_error(n, "bad_distance");
    }
    bool found = false;
    for (Direction d : {Direction::up, Direction::down, Direction::left, Direction::right}) {
      if (f[5] == to_string(d)) {
        t.direction = d;
        found = true;
      }
    }
    if (!found) csv_error(n, "bad_direction");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      const auto d = text::parse_double(f[6 + k]);
      if (!d) csv_error(n, "bad_number");
      v[k] = *d;
    }
    t.source = {v[0], v[1]};
    t.target = {v[2], v[3]};
    trials.push_back(t);
  }
  return trials;
}

std::string results_to_csv(std::span<const TrialResult> results) {
  std::string out = "index,time_s,passed\n";
  for (const auto& r : results) {
    out += std::to_string(r.trial_index);
    out += ',';
    text::append_fixed(out, r.completion_time_s, 3);
    out += r.passed ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<TrialResult> results_from_csv(std::string_view csv) {
  const auto all = text::lines(csv);
  if (all.empty() || all.front() != "index,time_s,passed") csv_error(1, "bad_header");
  std::vector<TrialResult> results;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t n = i + 1;
    if (all[i].empty()) continue;
    const auto f = text::split(all[i], ',');
    if (f.size() != 3) csv_error(n, "field_count");
    const auto index = text::parse_int(f[0]);
    const auto time = text::parse_double(f[1]);
    if (!index) csv_error(n, "bad_index");
    if (!time || *time <= 0.0) csv_error(n, "bad_time");
    if (f[2] != "0" && f[2] != "1") csv_error(n, "bad_passed");
    results.push_back({static_cast<int>(*index), *time, f[2] == "1"});
  }
  return results;
}

std::string stats_to_csv(std::span<const ConditionStats> stats) {
  std::string out = "group,n,mean_time_s,failure_rate,min,q1,median,q3,max\n";
  for (const auto& s : stats) {
    out += s.key;
    out += ',';
    out += std::to_string(s.n);
    for (double v : {s.mean_time_s, s.failure_rate, s.times.min, s.times.q1, s.times.median,
                     s.times.q3, s.times.max}) {
      out += ',';
      text::append_fixed(out, v, 3);
    }
    out += '\n';
  }
  return out;
}

std::vector<JoinedTrial> join(std::span<const TrialSpec> trials,
                              std::span<const TrialResult> results) {
  std::unordered_map<int, const TrialSpec*> by_index;
  for (const auto& t : trials) by_index.emplace(t.index, &t);
  std::vector<JoinedTrial> rows;
  rows.reserve(results.size());
  for (const auto& r : results) {
    auto it = by_index.find(r.trial_index);
    if (it == by_index.end()) throw StudyError("mismatched_trial");
    rows.push_back({*it->second, r});
  }
  return rows;
}

}  // namespace tapdrag::study
