#include "tapdrag/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "tapdrag/gesture_integrator.hpp"
#include "tapdrag/text_format.hpp"

namespace tapdrag {

namespace {

constexpr int kTraceDigits = 3;
constexpr int kLogDigits = 3;
constexpr int kSceneDigits = 6;

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

void append_ms(std::string& out, double t) { out += std::to_string(std::llround(t)); }

// ---- trace -----------------------------------------------------------------

void parse_header(std::string_view line, std::size_t n, TraceFile& trace) {
  const auto fields = text::split_ws(line);
  const std::string_view directive = fields.front();
  if (directive == "#display") {
    if (fields.size() != 3) throw ParseError(n, "bad_header");
    const auto w = text::parse_double(fields[1]);
    const auto h = text::parse_double(fields[2]);
    if (!w || !h || *w <= 0.0 || *h <= 0.0) throw ParseError(n, "bad_header");
    trace.display = DisplaySize{*w, *h};
  } else if (directive == "#dpi") {
    if (fields.size() != 2) throw ParseError(n, "bad_header");
    const auto dpi = text::parse_double(fields[1]);
    if (!dpi || *dpi <= 0.0) throw ParseError(n, "bad_header");
    trace.dpi = *dpi;
  } else if (directive == "#config") {
    if (fields.size() != 2) throw ParseError(n, "bad_config");
    const std::string_view kv = fields[1];
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ParseError(n, "bad_config");
    EngineConfig probe;
    if (!apply_config_option(probe, kv.substr(0, eq), kv.substr(eq + 1))) {
      throw ParseError(n, "bad_config");
    }
    trace.config.emplace_back(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  } else {
    throw ParseError(n, "bad_header");
  }
}

TouchEvent parse_event(std::string_view line, std::size_t n) {
  const auto fields = text::split_ws(line);
  if (fields.size() != 5) throw ParseError(n, "field_count");
  TouchEvent e;
  const auto t = text::parse_uint(fields[0]);
  if (!t) throw ParseError(n, "bad_timestamp");
  e.timestamp_ms = static_cast<double>(*t);
  const auto id = text::parse_uint(fields[1]);
  if (!id || *id == 0 || *id > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(n, "bad_touch_id");
  }
  e.touch_id = TouchId{static_cast<std::uint32_t>(*id)};
  if (fields[2] == "d") {
    e.phase = Phase::down;
  } else if (fields[2] == "m") {
    e.phase = Phase::move;
  } else if (fields[2] == "u") {
    e.phase = Phase::up;
  } else {
    throw ParseError(n, "bad_phase");
  }
  const auto x = text::parse_double(fields[3]);
  const auto y = text::parse_double(fields[4]);
  if (!x || !y) throw ParseError(n, "bad_coordinate");
  e.position = {*x, *y};
  return e;
}

char phase_code(Phase p) {
  switch (p) {
    case Phase::down: return 'd';
    case Phase::move: return 'm';
    case Phase::up: return 'u';
  }
  return '?';
}

// ---- gesture log -----------------------------------------------------------

struct Field {
  std::string_view key;
  std::string value;
};

void append_point(std::string& out, Point2 p) {
  text::append_fixed(out, p.x, kLogDigits);
  out += ',';
  text::append_fixed(out, p.y, kLogDigits);
}

std::string ids_value(const std::vector<ObjectId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(to_underlying(ids[i]));
  }
  return s;
}

std::string region_value(const SelectionRegion& region) {
  std::string s;
  if (const auto* r = std::get_if<RectRegion>(&region)) {
    s = "rect:";
    append_point(s, r->corner_a);
    s += ',';
    append_point(s, r->corner_b);
    return s;
  }
  s = "polygon:";
  const auto& vertices = std::get<PolygonRegion>(region).vertices;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) s += ';';
    append_point(s, vertices[i]);
  }
  return s;
}

std::string num(double v) { return text::fixed(v, kLogDigits); }
std::string id_str(ObjectId id) { return std::to_string(to_underlying(id)); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Field> event_fields(const GestureEvent& event) {
  return std::visit(
      overloaded{
          [](const SourceAcquired& e) -> std::vector<Field> { return {{"object", id_str(e.object)}}; },
          [](const PreviewMoved& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)}, {"x", num(e.to.x)}, {"y", num(e.to.y)}};
          },
          [](const Committed& e) -> std::vector<Field> {
            return {{"dx", num(e.translation.x)},
                    {"dy", num(e.translation.y)},
                    {"objects", ids_value(e.objects)}};
          },
          [](const Reverted& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)}, {"x", num(e.to.x)}, {"y", num(e.to.y)}};
          },
          [](const Aborted& e) -> std::vector<Field> { return {{"object", id_str(e.object)}}; },
          [](const SelectionPreview& e) -> std::vector<Field> {
            return {{"region", region_value(e.region)}};
          },
          [](const SelectionChanged& e) -> std::vector<Field> { return {{"ids", ids_value(e.ids)}}; },
          [](const BackgroundTap&) -> std::vector<Field> { return {}; },
          [](const DragStarted& e) -> std::vector<Field> { return {{"object", id_str(e.object)}}; },
          [](const DragMoved& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)}, {"x", num(e.to.x)}, {"y", num(e.to.y)}};
          },
          [](const Dropped& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)}, {"x", num(e.at.x)}, {"y", num(e.at.y)}};
          },
          [](const ManipulationUpdated& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)},
                    {"rotation", num(e.transform.rotation)},
                    {"scale", num(e.transform.scale)},
                    {"tx", num(e.transform.translation.x)},
                    {"ty", num(e.transform.translation.y)}};
          },
          [](const GhostShown& e) -> std::vector<Field> {
            return {{"object", id_str(e.object)}, {"x", num(e.at.x)}, {"y", num(e.at.y)}};
          },
          [](const GhostResolved& e) -> std::vector<Field> {
            return {{"as", e.as == GhostResolution::tapdrag ? "tapdrag" : "manipulation"}};
          },
          [](const RubberBandChanged& e) -> std::vector<Field> {
            std::string s;
            append_point(s, e.rect.corner_a);
            s += ',';
            append_point(s, e.rect.corner_b);
            return {{"rect", s}};
          },
      },
      event);
}

class FieldReader {
 public:
  FieldReader(std::vector<std::pair<std::string_view, std::string_view>> fields, std::size_t line)
      : fields_(std::move(fields)), line_(line) {}

  std::string_view raw(std::string_view key) const {
    for (const auto& [k, v] : fields_) {
      if (k == key) return v;
    }
    throw ParseError(line_, "missing_key");
  }
  double number(std::string_view key) const {
    const auto v = text::parse_double(raw(key));
    if (!v) throw ParseError(line_, "bad_number");
    return *v;
  }
  ObjectId object(std::string_view key = "object") const { return parse_object(raw(key)); }
  Point2 point() const { return {number("x"), number("y")}; }

  ObjectId parse_object(std::string_view s) const {
    const auto v = text::parse_int(s);
    if (!v) throw ParseError(line_, "bad_id");
    return ObjectId{*v};
  }
  std::vector<ObjectId> ids(std::string_view key) const {
    std::vector<ObjectId> out;
    const std::string_view s = raw(key);
    if (s.empty()) return out;
    for (auto part : text::split(s, ',')) out.push_back(parse_object(part));
    return out;
  }
  std::vector<Point2> points(std::string_view s) const {
    std::vector<Point2> out;
    for (auto pair : text::split(s, ';')) {
      const auto xy = text::split(pair, ',');
      if (xy.size() != 2) throw ParseError(line_, "bad_region");
      const auto x = text::parse_double(xy[0]);
      const auto y = text::parse_double(xy[1]);
      if (!x || !y) throw ParseError(line_, "bad_number");
      out.push_back({*x, *y});
    }
    return out;
  }
  RectRegion rect(std::string_view s) const {
    const auto parts = text::split(s, ',');
    if (parts.size() != 4) throw ParseError(line_, "bad_region");
    double v[4];
    for (int i = 0; i < 4; ++i) {
      const auto d = text::parse_double(parts[i]);
      if (!d) throw ParseError(line_, "bad_number");
      v[i] = *d;
    }
    return {{v[0], v[1]}, {v[2], v[3]}};
  }
  std::size_t line() const { return line_; }

 private:
  std::vector<std::pair<std::string_view, std::string_view>> fields_;
  std::size_t line_;
};

GestureEvent build_event(std::string_view name, const FieldReader& f) {
  if (name == "SOURCE_ACQUIRED") return SourceAcquired{f.object()};
  if (name == "PREVIEW_MOVED") return PreviewMoved{f.object(), f.point()};
  if (name == "COMMITTED") return Committed{f.ids("objects"), {f.number("dx"), f.number("dy")}};
  if (name == "REVERTED") return Reverted{f.object(), f.point()};
  if (name == "ABORTED") return Aborted{f.object()};
  if (name == "SELECTION_PREVIEW") {
    const std::string_view v = f.raw("region");
    if (v.starts_with("rect:")) return SelectionPreview{f.rect(v.substr(5))};
    if (v.starts_with("polygon:")) return SelectionPreview{PolygonRegion{f.points(v.substr(8))}};
    throw ParseError(f.line(), "bad_region");
  }
  if (name == "SELECTION_CHANGED") return SelectionChanged{f.ids("ids")};
  if (name == "BACKGROUND_TAP") return BackgroundTap{};
  if (name == "DRAG_STARTED") return DragStarted{f.object()};
  if (name == "DRAG_MOVED") return DragMoved{f.object(), f.point()};
  if (name == "DROPPED") return Dropped{f.object(), f.point()};
  if (name == "MANIPULATION_UPDATED") {
    SimilarityTransform xf;
    xf.rotation = f.number("rotation");
    xf.scale = f.number("scale");
    xf.translation = {f.number("tx"), f.number("ty")};
    return ManipulationUpdated{f.object(), xf};
  }
  if (name == "GHOST_SHOWN") return GhostShown{f.object(), f.point()};
  if (name == "GHOST_RESOLVED") {
    const std::string_view v = f.raw("as");
    if (v == "tapdrag") return GhostResolved{GhostResolution::tapdrag};
    if (v == "manipulation") return GhostResolved{GhostResolution::manipulation};
    throw ParseError(f.line(), "bad_value");
  }
  if (name == "RUBBER_BAND_CHANGED") return RubberBandChanged{f.rect(f.raw("rect"))};
  throw ParseError(f.line(), "unknown_event");
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

TraceFile parse_trace(std::string_view text) {
  TraceFile trace;
  const auto all = text::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::string_view line = all[i];
    const std::size_t n = i + 1;
    if (text::split_ws(line).empty()) continue;
    if (line.starts_with("# ") || line == "#") continue;  // comment
    if (line.front() == '#') {
      parse_header(line, n, trace);
    } else {
      trace.events.push_back(parse_event(line, n));
    }
  }
  return trace;
}

std::string serialize_trace(const TraceFile& trace) {
  std::string out;
  if (trace.display) {
    out += "#display " + shortest(trace.display->width_mm) + ' ' +
           shortest(trace.display->height_mm) + '\n';
  }
  if (trace.dpi) out += "#dpi " + shortest(*trace.dpi) + '\n';
  for (const auto& [key, value] : trace.config) out += "#config " + key + '=' + value + '\n';
  out.reserve(out.size() + trace.events.size() * 32);
  for (const TouchEvent& e : trace.events) {
    append_ms(out, e.timestamp_ms);
    out += ' ';
    out += std::to_string(to_underlying(e.touch_id));
    out += ' ';
    out += phase_code(e.phase);
    out += ' ';
    text::append_fixed(out, e.position.x, kTraceDigits);
    out += ' ';
    text::append_fixed(out, e.position.y, kTraceDigits);
    out += '\n';
  }
  return out;
}

bool apply_config_option(EngineConfig& config, std::string_view key, std::string_view value) {
  if (key == "policy") {
    if (value == "fig8") {
      config.policy = Policy::fig8;
    } else if (value == "ghost") {
      config.policy = Policy::ghost;
    } else {
      return false;
    }
    return true;
  }
  if (key == "stacking") {
    if (value == "on") {
      config.stacking_rule = StackingRule::tapdrag_on_object_target;
    } else if (value == "off") {
      config.stacking_rule = StackingRule::reject_object_target;
    } else {
      return false;
    }
    return true;
  }
  if (key == "slop" || key == "tolerance") {
    const auto v = text::parse_double(value);
    if (!v || *v <= 0.0) return false;
    (key == "slop" ? config.slop_radius : config.target_tolerance_radius) = *v;
    return true;
  }
  return false;
}

EngineConfig config_from_trace(const TraceFile& trace, EngineConfig base) {
  if (trace.display) base.display = *trace.display;
  if (trace.dpi) base.dpi = *trace.dpi;
  for (const auto& [key, value] : trace.config) apply_config_option(base, key, value);
  return base;
}

void append_log_line(std::string& out, const LogEntry& entry) {
  append_ms(out, entry.timestamp_ms);
  out += ' ';
  out += event_name(entry.event);
  auto fields = event_fields(entry.event);
  std::sort(fields.begin(), fields.end(),
            [](const Field& a, const Field& b) { return a.key < b.key; });
  for (const auto& f : fields) {
    out += ' ';
    out += f.key;
    out += '=';
    out += f.value;
  }
  out += '\n';
}

std::string format_log_line(const LogEntry& entry) {
  std::string out;
  append_log_line(out, entry);
  out.pop_back();
  return out;
}

std::string serialize_gesture_log(std::span<const LogEntry> log) {
  std::string out;
  for (const auto& entry : log) append_log_line(out, entry);
  return out;
}

LogEntry parse_log_line(std::string_view line, std::size_t n) {
  const auto tokens = text::split_ws(line);
  if (tokens.size() < 2) throw ParseError(n, "field_count");
  const auto t = text::parse_int(tokens[0]);
  if (!t || *t < 0) throw ParseError(n, "bad_timestamp");
  std::vector<std::pair<std::string_view, std::string_view>> fields;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) throw ParseError(n, "bad_field");
    fields.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
  }
  const FieldReader reader(std::move(fields), n);
  return LogEntry{static_cast<double>(*t), build_event(tokens[1], reader)};
}

std::vector<LogEntry> parse_gesture_log(std::string_view text) {
  std::vector<LogEntry> log;
  const auto all = text::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::split_ws(all[i]).empty()) continue;
    log.push_back(parse_log_line(all[i], i + 1));
  }
  return log;
}

std::string serialize_scene(const Scene& scene) {
  std::string out;
  for (const auto& o : scene.objects()) {
    out += std::to_string(to_underlying(o.id));
    out += ' ';
    out += std::to_string(o.z);
    const auto field = [&out](double v) {
      out += ' ';
      text::append_fixed(out, v, kSceneDigits);
    };
    if (const auto* c = std::get_if<Circle>(&o.shape)) {
      out += " circle";
      field(o.center.x);
      field(o.center.y);
      field(c->radius);
    } else {
      const auto& r = std::get<Rectangle>(o.shape);
      out += " rect";
      field(o.center.x);
      field(o.center.y);
      field(r.width);
      field(r.height);
    }
    field(o.rotation);
    field(o.scale);
    out += o.draggable ? " 1" : " 0";
    out += o.selected ? " 1" : " 0";
    out += '\n';
  }
  return out;
}

Scene parse_scene(std::string_view text) {
  Scene scene;
  const auto all = text::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t n = i + 1;
    const auto f = text::split_ws(all[i]);
    if (f.empty() || f.front().starts_with('#')) continue;
    if (f.size() < 3) throw ParseError(n, "field_count");
    const bool circle = f[2] == "circle";
    if (!circle && f[2] != "rect") throw ParseError(n, "bad_kind");
    const std::size_t expected = circle ? 10 : 11;
    if (f.size() != expected) throw ParseError(n, "field_count");

    auto number = [&](std::size_t k) {
      const auto v = text::parse_double(f[k]);
      if (!v) throw ParseError(n, "bad_number");
      return *v;
    };
    auto flag = [&](std::size_t k) {
      if (f[k] == "1") return true;
      if (f[k] == "0") return false;
      throw ParseError(n, "bad_flag");
    };
    const auto id = text::parse_int(f[0]);
    const auto z = text::parse_int(f[1]);
    if (!id) throw ParseError(n, "bad_id");
    if (!z || *z < std::numeric_limits<int>::min() || *z > std::numeric_limits<int>::max()) {
      throw ParseError(n, "bad_z");
    }
    SceneObject o;
    o.id = ObjectId{*id};
    o.z = static_cast<int>(*z);
    o.center = {number(3), number(4)};
    std::size_t k = 5;
    if (circle) {
      o.shape = Circle{number(k++)};
    } else {
      const double w = number(k++);
      o.shape = Rectangle{w, number(k++)};
    }
    o.rotation = number(k++);
    o.scale = number(k++);
    o.draggable = flag(k++);
    o.selected = flag(k++);
    try {
      scene.add(o);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(n, ex.what());
    }
  }
  return scene;
}

ReplayResult replay(std::span<const TouchEvent> events, Scene scene, const EngineConfig& config) {
  RecognizerSession session(std::move(scene), config);
  ReplayResult result;
  std::vector<GestureEvent> out;
  for (const TouchEvent& e : events) {
    out.clear();
    session.process_event(e, out);
    for (auto& g : out) result.log.push_back(LogEntry{e.timestamp_ms, std::move(g)});
  }
  result.final_scene = session.scene();
  return result;
}

}  // namespace tapdrag
