#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "tana/app/session.hpp"
#include "tana/spaces/wire.hpp"

using namespace tana;
using namespace tana::app;
using tana::test::check_error;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json fall1() { return nlohmann::json::parse(read_file(std::string(TANA_SCENARIO_DIR) + "/fall1.json")); }

nlohmann::json quiet_room() {
  return nlohmann::json::parse(R"({
    "name": "quiet", "seed": 9, "duration_ticks": 500, "tick_quantum_us": 1000,
    "floorplan": {"rooms": [{"id": "den", "x_min": 0, "y_min": 0, "z_min": 0, "x_max": 4, "y_max": 4, "z_max": 3}],
                  "adjacency": []},
    "sensors": [
      {"sensor_id": "t", "kind": "thermometer", "scale": 0.01, "placement": {"coords": [1.0, 1.0, 2.0]},
       "period_ticks": 10, "min_period_ticks": 1, "max_period_ticks": 1000}
    ],
    "events": []
  })");
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string rename_ids(std::string text, const std::vector<std::pair<std::string, std::string>>& renames) {
  for (const auto& [from, to] : renames) {
    for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
      text.replace(pos, from.size(), to);
    }
  }
  return text;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const auto plain = load_app_config(quiet_room());
  CHECK(plain.detector.theta_impact_g == fall::DetectorParams{}.theta_impact_g);
  CHECK(plain.views.empty());
  CHECK_FALSE(plain.search_volume);

  auto doc = quiet_room();
  doc["detector"] = {{"h_floor_m", 0.4}, {"accel_only_policy", "suppressed"}};
  doc["views"] = nlohmann::json::parse(R"([{"view_id": "warm", "values": {"temperature": "fahrenheit"}}])");
  doc["search_volume"] = {{"min", {0, 0, 0}}, {"max", {4, 4, 2.5}}};
  const auto cfg = load_app_config(doc);
  CHECK(cfg.detector.h_floor_m == 0.4);
  CHECK(cfg.detector.accel_only_policy == fall::AccelOnlyPolicy::Suppressed);
  REQUIRE(cfg.views.size() == 1);
  CHECK(cfg.views[0].view_id == "warm");
  CHECK(cfg.views[0].physical_space_id == "room-cartesian");
  REQUIRE(cfg.search_volume);
  CHECK(cfg.search_volume->max.z == 2.5);

  Session session(cfg);
  CHECK(session.spaces().has_view("warm"));
  CHECK(session.pipeline_config().search_volume.max.z == 2.5);
  CHECK(Session(plain).pipeline_config().search_volume.max.x == 4.0);
}

TEST_CASE("config errors are schema errors") {
  check_error(ErrorCode::SchemaError, [] { load_app_config_text("{not json"); });
  check_error(ErrorCode::SchemaError, [] { load_app_config_file("/nonexistent/scenario.json"); });
  auto with = [](const char* key, const nlohmann::json& value) {
    auto doc = quiet_room();
    doc[key] = value;
    return doc;
  };
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("detector", 3)); });
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("detector", {{"theta_impact_g", "high"}})); });
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("detector", {{"theta_impact_g", 0.5}})); });
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("detector", {{"accel_only_policy", "maybe"}})); });
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("views", {{{"values", {}}}})); });
  check_error(ErrorCode::SchemaError,
              [&] { load_app_config(with("views", {{{"view_id", "v"}, {"values", {{"smell", "celsius"}}}}})); });
  check_error(ErrorCode::SchemaError,
              [&] { load_app_config(with("search_volume", {{"min", {0, 0, 0}}, {"max", {0, 1, 1}}})); });
  check_error(ErrorCode::SchemaError, [&] { load_app_config(with("search_volume", {{"min", {0, 0}}})); });
  // Views that name unknown spaces fail when the registry is built.
  auto bad_view = with("views", {{{"view_id", "v"}, {"values", {{"temperature", "kelvin"}}}}});
  check_error(ErrorCode::SchemaError, [&] { Session s(load_app_config(bad_view)); });
}

TEST_CASE("fall1 end to end") {
  Session session(load_app_config(fall1()));
  const auto outcome = session.run();
  CHECK(outcome.samples.size() == 2000 + 2000 + 20);
  CHECK(outcome.summary.total_samples() == outcome.samples.size());
  CHECK(outcome.summary.ticks_elapsed == 20000);
  for (const auto& s : outcome.samples) REQUIRE(s.provenance.has_value());
  REQUIRE(outcome.detection.alarms.size() == 1);
  const auto& alarm = outcome.detection.alarms[0];
  CHECK(alarm.t_s == doctest::Approx(5.3));
  CHECK(alarm.confidence == fall::Confidence::Corroborated);
  CHECK(alarm.room == std::optional<std::string>("living"));
  // The music is heard and placed above the floor.
  REQUIRE(outcome.detection.sounds.size() == 2);
  CHECK(outcome.detection.sounds[0].estimated_height_m < 0.5);
  CHECK(outcome.detection.sounds[1].estimated_height_m > 1.5);
}

TEST_CASE("rendered output") {
  Session session(load_app_config(quiet_room()));
  const auto outcome = session.run();
  const auto lines = lines_of(render_run_output(session, outcome, {"native", "fahrenheit"}));
  REQUIRE(lines.size() == 1 + 50 + 1 + 50 + 1);
  CHECK(lines[0] == R"({"type":"view","view":"native","samples":50})");
  CHECK(lines[51] == R"({"type":"view","view":"fahrenheit","samples":50})");
  CHECK(lines[1].find(R"("space":"celsius")") != std::string::npos);
  CHECK(lines[52].find(R"("space":"fahrenheit")") != std::string::npos);
  CHECK(lines.back() ==
        R"({"type":"run_summary","ticks_elapsed":500,"samples_per_sensor":{"t":50},"faults_per_sensor":{"t":0}})");
  for (std::size_t i = 1; i <= 50; ++i) CHECK(lines[i].find("sensor_id") == std::string::npos);
}

TEST_CASE("runs are deterministic and independent of queue and pacing") {
  const auto cfg = load_app_config(fall1());
  Session a(cfg);
  const auto out_a = a.run();
  const auto text_a = render_run_output(a, out_a, {"native", "graph"});
  Session b(cfg);
  const auto out_b = b.run();
  CHECK(render_run_output(b, out_b, {"native", "graph"}) == text_a);

  Session tiny(cfg, kernel::PacingMode::AsFastAsPossible, 1);
  const auto out_tiny = tiny.run();
  CHECK(render_run_output(tiny, out_tiny, {"native", "graph"}) == text_a);

  const auto quiet = load_app_config(quiet_room());
  Session fast(quiet);
  Session paced(quiet, kernel::PacingMode::RealTimePaced);
  const auto f = fast.run();
  const auto p = paced.run();
  CHECK(render_run_output(fast, f, {"native"}) == render_run_output(paced, p, {"native"}));

  auto reseeded = fall1();
  reseeded["seed"] = 43;
  Session c(load_app_config(reseeded));
  const auto out_c = c.run();
  CHECK(render_run_output(c, out_c, {"native"}) != render_run_output(a, out_a, {"native"}));
}

TEST_CASE("detection does not depend on sensor identifiers") {
  const auto original_doc = fall1();
  const auto renamed_doc = nlohmann::json::parse(
      rename_ids(original_doc.dump(), {{"wrist-accel", "zz-imu-7"}, {"mic-array", "aa-acoustic"}, {"kitchen-temp", "k9"}}));
  REQUIRE(renamed_doc.dump() != original_doc.dump());
  Session original(load_app_config(original_doc));
  Session renamed(load_app_config(renamed_doc));
  const auto a = original.run();
  const auto b = renamed.run();
  CHECK(a.detection.alarms == b.detection.alarms);

  // Sample lines match as a multiset; only same-tick ordering may follow the new ids.
  auto sorted_lines = [](const Session& s, const RunOutcome& o) {
    auto lines = lines_of(render_run_output(s, o, {"native"}));
    lines.pop_back();  // the summary names sensors
    std::sort(lines.begin(), lines.end());
    return lines;
  };
  CHECK(sorted_lines(original, a) == sorted_lines(renamed, b));
}

TEST_CASE("consumer errors stop the run") {
  Session session(load_app_config(fall1()));
  int seen = 0;
  CHECK_THROWS_AS(session.run([&](const spaces::NormalizedSample&) {
    if (++seen == 100) throw std::runtime_error("consumer gave up");
  }),
                  std::runtime_error);
  CHECK(session.kernel().finished());
}
