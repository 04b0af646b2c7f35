#include "tana/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tana/error.hpp"
#include "tana/spaces/standard.hpp"

namespace tana::sim {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& reason = "") {
  throw Error(ErrorCode::SchemaError, reason.empty() ? path : path + " (" + reason + ")");
}

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) schema_error(join(path, key), "required");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(path, "not finite");
  return d;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && std::floor(d) == d) return static_cast<std::int64_t>(d);
  }
  schema_error(path, "expected integer");
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected string");
  return v.get<std::string>();
}

double opt_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? fallback : number(*it, join(path, key));
}

Vec3 vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) schema_error(path, "expected [x, y, z]");
  return {number(v[0], index(path, 0)), number(v[1], index(path, 1)), number(v[2], index(path, 2))};
}

const json& object(const json& v, const std::string& path) {
  if (!v.is_object()) schema_error(path.empty() ? "$" : path, "expected object");
  return v;
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected array");
  return v;
}

spaces::BuildingGraph parse_floorplan(const json& doc) {
  const json& fp = object(field(doc, "floorplan", ""), "floorplan");
  std::vector<spaces::RoomBox> rooms;
  const json& rooms_json = array(field(fp, "rooms", "floorplan"), "floorplan.rooms");
  for (std::size_t i = 0; i < rooms_json.size(); ++i) {
    const std::string p = index("floorplan.rooms", i);
    const json& r = object(rooms_json[i], p);
    spaces::RoomBox box;
    box.id = text(field(r, "id", p), join(p, "id"));
    box.min = {number(field(r, "x_min", p), join(p, "x_min")), number(field(r, "y_min", p), join(p, "y_min")),
               number(field(r, "z_min", p), join(p, "z_min"))};
    box.max = {number(field(r, "x_max", p), join(p, "x_max")), number(field(r, "y_max", p), join(p, "y_max")),
               number(field(r, "z_max", p), join(p, "z_max"))};
    rooms.push_back(std::move(box));
  }
  if (rooms.empty()) schema_error("floorplan.rooms", "at least one room required");
  std::vector<std::pair<std::string, std::string>> adjacency;
  if (auto it = fp.find("adjacency"); it != fp.end()) {
    const json& adj = array(*it, "floorplan.adjacency");
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const std::string p = index("floorplan.adjacency", i);
      if (!adj[i].is_array() || adj[i].size() != 2) schema_error(p, "expected [id, id]");
      adjacency.emplace_back(text(adj[i][0], index(p, 0)), text(adj[i][1], index(p, 1)));
    }
  }
  try {
    return spaces::BuildingGraph(std::move(rooms), std::move(adjacency));
  } catch (const Error& e) {
    schema_error("floorplan", e.detail());
  }
}

spaces::Position parse_placement(const json& s, const std::string& path, const std::vector<Vec3>& mics) {
  auto it = s.find("placement");
  if (it == s.end() || it->is_null()) {
    if (!mics.empty()) return {spaces::Cartesian3{mics.front()}, spaces::kRoomCartesian};
    schema_error(join(path, "placement"), "required");
  }
  const std::string p = join(path, "placement");
  const json& pl = object(*it, p);
  if (pl.contains("coords")) {
    return {spaces::Cartesian3{vec3(pl["coords"], join(p, "coords"))}, spaces::kRoomCartesian};
  }
  if (pl.contains("entity")) {
    std::string attachment = pl.contains("attachment") ? text(pl["attachment"], join(p, "attachment")) : "body";
    return {spaces::BodyWorn{text(pl["entity"], join(p, "entity")), std::move(attachment)}, spaces::kBodyFrame};
  }
  schema_error(p, "expected coords or entity");
}

SensorConfig parse_sensor(const json& s, const std::string& path) {
  object(s, path);
  SensorConfig cfg;
  auto& d = cfg.descriptor;
  d.sensor_id = text(field(s, "sensor_id", path), join(path, "sensor_id"));
  if (d.sensor_id.empty()) schema_error(join(path, "sensor_id"), "empty");
  const std::string kind_text = text(field(s, "kind", path), join(path, "kind"));
  auto kind = kernel::sensor_kind_from_string(kind_text);
  if (!kind) schema_error(join(path, "kind"), "unknown sensor kind '" + kind_text + "'");
  d.kind = *kind;

  std::vector<Vec3> mics;
  if (d.kind == kernel::SensorKind::MicrophoneArray) {
    const json& mj = array(field(s, "mic_positions", path), join(path, "mic_positions"));
    for (std::size_t i = 0; i < mj.size(); ++i) mics.push_back(vec3(mj[i], index(join(path, "mic_positions"), i)));
  }

  const int default_channels = d.kind == kernel::SensorKind::Accelerometer ? 3
                               : d.kind == kernel::SensorKind::Thermometer ? 1
                                                                           : static_cast<int>(mics.size());
  d.channel_count = s.contains("channel_count")
                        ? static_cast<int>(integer(s["channel_count"], join(path, "channel_count")))
                        : default_channels;
  const char* default_unit = d.kind == kernel::SensorKind::Accelerometer ? "g"
                             : d.kind == kernel::SensorKind::Thermometer ? "celsius"
                                                                         : "us";
  d.native_unit = s.contains("native_unit") ? text(s["native_unit"], join(path, "native_unit")) : default_unit;
  d.scale = number(field(s, "scale", path), join(path, "scale"));
  d.offset = opt_number(s, "offset", path, 0.0);
  d.placement = parse_placement(s, path, mics);
  d.min_period_ticks = integer(field(s, "min_period_ticks", path), join(path, "min_period_ticks"));
  d.max_period_ticks = integer(field(s, "max_period_ticks", path), join(path, "max_period_ticks"));

  try {
    kernel::validate(d);
  } catch (const Error& e) {
    schema_error(join(path, e.detail()), "invalid descriptor");
  }
  if (d.kind == kernel::SensorKind::Thermometer && d.native_unit != "celsius" && d.native_unit != "fahrenheit") {
    schema_error(join(path, "native_unit"), "thermometers report celsius or fahrenheit");
  }
  if (d.kind == kernel::SensorKind::Accelerometer && !std::holds_alternative<spaces::BodyWorn>(d.placement.where)) {
    schema_error(join(path, "placement"), "accelerometers are body-worn");
  }

  auto& e = cfg.schedule;
  e.sensor_id = d.sensor_id;
  e.period_ticks = integer(field(s, "period_ticks", path), join(path, "period_ticks"));
  e.phase_ticks = s.contains("phase_ticks") ? integer(s["phase_ticks"], join(path, "phase_ticks")) : 0;
  e.enabled = s.contains("enabled") ? s["enabled"].get<bool>() : true;
  if (e.period_ticks < d.min_period_ticks || e.period_ticks > d.max_period_ticks) {
    schema_error(join(path, "period_ticks"), "outside [min_period_ticks, max_period_ticks]");
  }
  if (e.phase_ticks < 0 || e.phase_ticks >= e.period_ticks) schema_error(join(path, "phase_ticks"), "must be < period");

  if (d.kind == kernel::SensorKind::MicrophoneArray) {
    if (mics.size() < 3) schema_error(join(path, "mic_positions"), "at least 3 microphones");
    bool spread = std::any_of(mics.begin(), mics.end(), [&](const Vec3& m) { return !(m == mics.front()); });
    if (!spread) schema_error(join(path, "mic_positions"), "microphones are coincident");
    MicArrayModel model;
    model.mic_positions = mics;
    model.speed_of_sound_mps = opt_number(s, "speed_of_sound_mps", path, 343.0);
    model.loudness_floor_db = opt_number(s, "loudness_floor_db", path, 35.0);
    model.frame_period_ticks = e.period_ticks;
    if (model.speed_of_sound_mps <= 0) schema_error(join(path, "speed_of_sound_mps"), "must be positive");
    cfg.mic_array = std::move(model);
  }
  if (s.contains("fault_every")) {
    const auto n = integer(s["fault_every"], join(path, "fault_every"));
    if (n < 1) schema_error(join(path, "fault_every"), "must be >= 1");
    cfg.fault_every = static_cast<int>(n);
  }
  return cfg;
}

AccelWaveformTemplate parse_template(const json& doc) {
  AccelWaveformTemplate t;
  auto it = doc.find("accel_template");
  if (it == doc.end()) return t;
  const std::string p = "accel_template";
  const json& j = object(*it, p);
  t.rest_magnitude = opt_number(j, "rest_magnitude", p, t.rest_magnitude);
  t.freefall_magnitude = opt_number(j, "freefall_magnitude", p, t.freefall_magnitude);
  t.freefall_duration_ms = opt_number(j, "freefall_duration_ms", p, t.freefall_duration_ms);
  t.impact_peak_g = opt_number(j, "impact_peak_g", p, t.impact_peak_g);
  t.impact_width_ms = opt_number(j, "impact_width_ms", p, t.impact_width_ms);
  t.settle_ms = opt_number(j, "settle_ms", p, t.settle_ms);
  if (t.freefall_magnitude < 0 || t.freefall_magnitude > 0.1) schema_error(join(p, "freefall_magnitude"), "must be in [0, 0.1]");
  if (t.freefall_duration_ms <= 0) schema_error(join(p, "freefall_duration_ms"), "must be positive");
  if (t.impact_width_ms <= 0) schema_error(join(p, "impact_width_ms"), "must be positive");
  if (t.settle_ms <= 0) schema_error(join(p, "settle_ms"), "must be positive");
  if (t.impact_peak_g <= t.rest_magnitude) schema_error(join(p, "impact_peak_g"), "must exceed rest magnitude");
  return t;
}

ScriptedEvent parse_event(const json& ev, const std::string& path) {
  object(ev, path);
  ScriptedEvent e;
  const std::string kind = text(field(ev, "kind", path), join(path, "kind"));
  if (kind == "fall") e.kind = EventKind::Fall;
  else if (kind == "music") e.kind = EventKind::Music;
  else if (kind == "footstep") e.kind = EventKind::Footstep;
  else schema_error(join(path, "kind"), "unknown event kind '" + kind + "'");
  e.t_start_ticks = integer(field(ev, "t_start_ticks", path), join(path, "t_start_ticks"));
  e.position = vec3(field(ev, "position", path), join(path, "position"));
  e.loudness_db = number(field(ev, "loudness_db", path), join(path, "loudness_db"));
  if (e.loudness_db < 0 || e.loudness_db > 140) schema_error(join(path, "loudness_db"), "must be in [0, 140]");
  if (ev.contains("entity_id") && !ev["entity_id"].is_null()) e.entity_id = text(ev["entity_id"], join(path, "entity_id"));
  if (e.kind == EventKind::Fall && e.entity_id.empty()) schema_error(join(path, "entity_id"), "falls need an entity");
  if (ev.contains("duration_ms")) {
    e.duration_ms = number(ev["duration_ms"], join(path, "duration_ms"));
    if (*e.duration_ms <= 0) schema_error(join(path, "duration_ms"), "must be positive");
  }
  return e;
}

Scenario parse_scenario(const json& doc);

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Fall: return "fall";
    case EventKind::Music: return "music";
    case EventKind::Footstep: return "footstep";
  }
  return "fall";
}

const SensorConfig* Scenario::mic_array_sensor() const {
  for (const auto& s : sensors) {
    if (s.mic_array) return &s;
  }
  return nullptr;
}

Tick ms_to_ticks(double ms, std::int64_t tick_quantum_us) {
  return static_cast<Tick>(std::llround(ms * 1000.0 / static_cast<double>(tick_quantum_us)));
}

Scenario load_scenario(const json& doc) {
  try {
    return parse_scenario(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("$ (") + e.what() + ")");
  }
}

namespace {
Scenario parse_scenario(const json& doc) {
  object(doc, "");
  Scenario sc;
  sc.name = doc.contains("name") ? text(doc["name"], "name") : std::string("unnamed");
  {
    const json& seed = field(doc, "seed", "");
    if (!seed.is_number_integer()) schema_error("seed", "expected integer");
    sc.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>() : static_cast<std::uint64_t>(seed.get<std::int64_t>());
  }
  sc.duration_ticks = integer(field(doc, "duration_ticks", ""), "duration_ticks");
  if (sc.duration_ticks < 0) schema_error("duration_ticks", "must be >= 0");
  sc.tick_quantum_us = integer(field(doc, "tick_quantum_us", ""), "tick_quantum_us");
  if (sc.tick_quantum_us < 1) schema_error("tick_quantum_us", "must be >= 1");
  sc.floorplan = parse_floorplan(doc);

  const json& sensors = array(field(doc, "sensors", ""), "sensors");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string p = index("sensors", i);
    auto cfg = parse_sensor(sensors[i], p);
    if (!ids.insert(cfg.descriptor.sensor_id).second) schema_error(join(p, "sensor_id"), "duplicate");
    if (cfg.mic_array && sc.mic_array_sensor()) schema_error(join(p, "kind"), "only one microphone array is supported");
    if (const auto* c = std::get_if<spaces::Cartesian3>(&cfg.descriptor.placement.where)) {
      bool in_room = std::any_of(sc.floorplan.rooms().begin(), sc.floorplan.rooms().end(),
                                 [&](const spaces::RoomBox& r) { return r.contains(c->point); });
      if (!in_room) throw Error(ErrorCode::GeometryError, join(p, "placement") + " is in no room");
    }
    sc.sensors.push_back(std::move(cfg));
  }

  if (auto it = doc.find("events"); it != doc.end()) {
    const json& events = array(*it, "events");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string p = index("events", i);
      auto e = parse_event(events[i], p);
      if (e.t_start_ticks < 0 || e.t_start_ticks >= sc.duration_ticks) {
        schema_error(join(p, "t_start_ticks"), "must be in [0, duration_ticks)");
      }
      if (!sc.floorplan.inside_bounds(e.position)) {
        throw Error(ErrorCode::GeometryError, join(p, "position") + " is outside the floorplan");
      }
      sc.events.push_back(std::move(e));
    }
  }

  if (auto it = doc.find("noise"); it != doc.end() && !it->is_null()) {
    const json& n = object(*it, "noise");
    sc.noise.accel_sigma_g = opt_number(n, "accel_sigma_g", "noise", sc.noise.accel_sigma_g);
    sc.noise.tdoa_jitter_us = opt_number(n, "tdoa_jitter_us", "noise", sc.noise.tdoa_jitter_us);
    if (sc.noise.accel_sigma_g < 0) schema_error("noise.accel_sigma_g", "must be >= 0");
    if (sc.noise.tdoa_jitter_us < 0) schema_error("noise.tdoa_jitter_us", "must be >= 0");
  }
  sc.accel_template = parse_template(doc);
  sc.ambient_c = opt_number(doc, "ambient_c", "", sc.ambient_c);

  if (auto it = doc.find("rate_commands"); it != doc.end()) {
    const json& cmds = array(*it, "rate_commands");
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      const std::string p = index("rate_commands", i);
      object(cmds[i], p);
      kernel::RateCommand c;
      c.sensor_id = text(field(cmds[i], "sensor_id", p), join(p, "sensor_id"));
      c.new_period_ticks = integer(field(cmds[i], "new_period_ticks", p), join(p, "new_period_ticks"));
      c.issued_at_tick = integer(field(cmds[i], "issued_at_tick", p), join(p, "issued_at_tick"));
      if (!ids.count(c.sensor_id)) schema_error(join(p, "sensor_id"), "unknown sensor");
      sc.rate_commands.push_back(std::move(c));
    }
  }
  return sc;
}
}  // namespace

Scenario load_scenario_text(std::string_view text_doc) {
  json doc;
  try {
    doc = json::parse(text_doc);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("$ (") + e.what() + ")");
  }
  return load_scenario(doc);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario_text(ss.str());
}

std::pair<Tick, Tick> sound_interval(const Scenario& scenario, const ScriptedEvent& event) {
  const auto q = scenario.tick_quantum_us;
  Tick start = event.t_start_ticks;
  double duration_ms = 0.0;
  switch (event.kind) {
    case EventKind::Fall:
      start += ms_to_ticks(scenario.accel_template.freefall_duration_ms, q);
      duration_ms = event.duration_ms.value_or(scenario.accel_template.impact_width_ms);
      break;
    case EventKind::Music: duration_ms = event.duration_ms.value_or(3000.0); break;
    case EventKind::Footstep: duration_ms = event.duration_ms.value_or(60.0); break;
  }
  return {start, start + std::max<Tick>(1, ms_to_ticks(duration_ms, q))};
}

std::vector<TruthRecord> ground_truth_events(const Scenario& scenario) {
  std::vector<TruthRecord> out;
  out.reserve(scenario.events.size());
  for (const auto& e : scenario.events) {
    out.push_back({e.kind,
                   static_cast<double>(e.t_start_ticks) * static_cast<double>(scenario.tick_quantum_us) / 1e6,
                   e.position, e.entity_id});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.time_s < b.time_s; });
  return out;
}

}  // namespace tana::sim
