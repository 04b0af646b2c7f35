// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance TANA_BINARY SCENARIO_DIR GOLDEN_FILE SCRATCH_DIR

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "tana/app/session.hpp"
#include "tana/error.hpp"
#include "tana/fall/localization.hpp"
#include "tana/hub/hub.hpp"
#include "tana/hub/server.hpp"
#include "tana/kernel/kernel.hpp"
#include "tana/kernel/schedule.hpp"
#include "tana/spaces/standard.hpp"

namespace fs = std::filesystem;
using namespace tana;
using json = nlohmann::json;

namespace {

struct Paths {
  std::string tana;
  fs::path scenarios;
  fs::path golden;
  fs::path scratch;
};

// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }
  bool passed() const { return count_ == 0; }
  std::string notes() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : ", ") + n;
    return out;
  }
  std::string summary() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) out += "; ...";
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t count_ = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> alarm_lines(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& line : lines_of(text)) {
    if (line.find(R"("type":"fall_alarm")") != std::string::npos) out.push_back(line);
  }
  return out;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run_command(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// `tana run` on a scenario file; returns the exit code and fills `output`.
int cli_run(const Paths& p, const fs::path& scenario, const fs::path& out, std::string& output,
            const std::string& extra = "") {
  fs::remove(out);
  const int code =
      run_command(quote(p.tana) + " run --scenario " + quote(scenario) + " --out " + quote(out) + " " + extra);
  output = read_file(out);
  return code;
}

std::vector<fs::path> suite_files(const Paths& p) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(p.scenarios / "suite")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool is_fall_scenario(const fs::path& file) {
  const auto doc = json::parse(read_file(file));
  for (const auto& e : doc["events"]) {
    if (e["kind"] == "fall") return true;
  }
  return false;
}

// ---- 1 -------------------------------------------------------------------------------------

Check scheduler_exactness() {
  Check c;
  kernel::DriverRegistry reg;
  const std::map<std::string, kernel::Tick> periods{{"a", 20}, {"b", 10}, {"c", 7}};
  for (const auto& [id, period] : periods) {
    kernel::SensorDescriptor d;
    d.sensor_id = id;
    d.kind = kernel::SensorKind::Thermometer;
    d.channel_count = 1;
    d.native_unit = "celsius";
    d.scale = 0.01;
    d.placement = {spaces::Cartesian3{{1, 1, 1}}, spaces::kRoomCartesian};
    d.min_period_ticks = 1;
    d.max_period_ticks = 1000;
    reg.register_driver(d, [](kernel::Tick t) { return std::vector<std::int64_t>{t % 97}; });
  }
  std::vector<kernel::ScheduleEntry> entries;
  for (const auto& [id, period] : periods) entries.push_back({id, period, 0, true});
  const auto records = kernel::run_acquisition(kernel::build_schedule(entries, reg), reg, 10000);

  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, std::uint64_t> next_seq;
  std::pair<kernel::Tick, std::string> prev{-1, ""};
  for (const auto& r : records) {
    const auto* s = std::get_if<kernel::RawSample>(&r);
    if (!s) continue;
    c.expect(std::make_pair(s->tick, s->sensor_id) > prev, "stream not sorted by (tick, sensor_id)");
    prev = {s->tick, s->sensor_id};
    c.expect(s->sequence_no == next_seq[s->sensor_id]++, "sequence gap for " + s->sensor_id);
    c.expect(s->tick % periods.at(s->sensor_id) == 0, "off-grid fire for " + s->sensor_id);
    ++counts[s->sensor_id];
  }
  // Independent count: ceil(duration / period) fires at phase 0.
  const std::map<std::string, std::uint64_t> expected{{"a", 500}, {"b", 1000}, {"c", 1429}};
  for (const auto& [id, n] : expected) {
    c.expect(counts[id] == n, id + ": " + std::to_string(counts[id]) + " samples, expected " + std::to_string(n));
    c.expect(kernel::expected_sample_count(periods.at(id), 0, 10000) == static_cast<kernel::Tick>(n),
             "expected_sample_count disagrees for " + id);
    c.expect((10000 + periods.at(id) - 1) / periods.at(id) == static_cast<kernel::Tick>(n), "oracle arithmetic");
  }
  c.expect(std::holds_alternative<kernel::RunSummary>(records.back()), "stream does not end with a summary");
  c.note(std::to_string(counts["a"]) + "/" + std::to_string(counts["b"]) + "/" + std::to_string(counts["c"]) + " samples");
  return c;
}

// ---- 2 -------------------------------------------------------------------------------------

Check determinism(const Paths& p) {
  Check c;
  const auto scenario = p.scenarios / "fall1.json";
  std::string first, second;
  c.expect(cli_run(p, scenario, p.scratch / "det_a.jsonl", first, "--seed 42") == 0, "first run failed");
  c.expect(cli_run(p, scenario, p.scratch / "det_b.jsonl", second, "--seed 42") == 0, "second run failed");
  c.expect(!first.empty() && first == second, "outputs differ between identical runs");

  std::string text = read_file(scenario);
  const std::vector<std::pair<std::string, std::string>> renames{
      {"wrist-accel", "imu-z9"}, {"mic-array", "acoustic-0"}, {"kitchen-temp", "thermo-b"}};
  for (const auto& [from, to] : renames) {
    for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
      text.replace(pos, from.size(), to);
    }
  }
  const auto renamed = p.scratch / "fall1_renamed.json";
  write_file(renamed, text);
  std::string third;
  c.expect(cli_run(p, renamed, p.scratch / "det_c.jsonl", third, "--seed 42") == 0, "renamed run failed");
  const auto alarms = alarm_lines(first);
  c.expect(!alarms.empty(), "no alarm lines to compare");
  c.expect(alarms == alarm_lines(third), "alarm lines change with sensor ids");
  c.note(std::to_string(first.size()) + " bytes, " + std::to_string(alarms.size()) + " alarm line(s)");
  return c;
}

// ---- 3 -------------------------------------------------------------------------------------

// Tick-by-tick model of one sensor: a command seen at `command_tick` arms the switch for the
// next fire strictly after it; that fire still happens and the new period counts from it.
std::vector<kernel::Tick> rate_oracle(kernel::Tick old_period, kernel::Tick new_period, kernel::Tick command_tick,
                                      kernel::Tick duration) {
  std::vector<kernel::Tick> fires;
  kernel::Tick period = old_period;
  kernel::Tick next = 0;
  bool armed = false;
  for (kernel::Tick t = 0; t < duration; ++t) {
    if (t == command_tick + 1) armed = true;
    if (t != next) continue;
    fires.push_back(t);
    if (armed) {
      period = new_period;
      armed = false;
    }
    next = t + period;
  }
  return fires;
}

Check rate_control() {
  Check c;
  const auto cfg = app::load_app_config(json::parse(R"({
    "name": "rate", "seed": 1, "duration_ticks": 10000, "tick_quantum_us": 1000,
    "floorplan": {"rooms": [{"id": "den", "x_min": 0, "y_min": 0, "z_min": 0, "x_max": 4, "y_max": 4, "z_max": 3}],
                  "adjacency": []},
    "sensors": [{"sensor_id": "probe", "kind": "thermometer", "scale": 0.01, "placement": {"coords": [1, 1, 1]},
                 "period_ticks": 20, "min_period_ticks": 1, "max_period_ticks": 1000}],
    "events": []
  })"));
  app::Session session(cfg);
  // The kernel is driven directly so its sink can hold the tick loop at t = 5.0 s.
  kernel::AcquisitionKernel kernel(session.drivers(), kernel::build_schedule({{"probe", 20, 0, true}}, session.drivers()),
                                   {0, 1000, kernel::PacingMode::AsFastAsPossible});
  hub::Hub hub(session.spaces(), session.drivers(), &kernel, 1000);
  hub::HubServer server(hub);
  const int port = server.bind("127.0.0.1", 0);
  c.expect(port > 0, "cannot bind");
  if (port <= 0) return c;
  server.start();

  std::mutex m;
  std::condition_variable cv;
  bool paused = false, resume = false;
  std::vector<kernel::Tick> fires;
  kernel::RunSummary summary;
  std::thread runner([&] {
    summary = kernel.run(10000, [&](kernel::StreamRecord r) {
      const auto* s = std::get_if<kernel::RawSample>(&r);
      if (!s) return;
      fires.push_back(s->tick);
      if (s->tick == 5000) {
        std::unique_lock lock(m);
        paused = true;
        cv.notify_all();
        cv.wait(lock, [&] { return resume; });
      }
    });
  });
  {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return paused; });
  }
  const auto stopped_at = kernel.last_completed_tick();
  c.expect(stopped_at == 5000, "kernel paused at tick " + std::to_string(stopped_at));
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/v1/sensors/probe/rate", R"({"rate_hz": 100})", "application/json");
  kernel::Tick effective = -1;
  c.expect(res && res->status == 202, "rate POST not accepted");
  if (res && res->status == 202) {
    const auto ack = json::parse(res->body);
    c.expect(ack["applied_period_ticks"] == 10, "applied period " + ack["applied_period_ticks"].dump());
    effective = ack["effective_from_tick"].get<kernel::Tick>();
  }
  {
    std::lock_guard lock(m);
    resume = true;
  }
  cv.notify_all();
  runner.join();
  server.stop();

  const auto expected = rate_oracle(20, 10, stopped_at, 10000);
  c.expect(fires == expected, "fire ticks differ from the tick-simulation oracle (command seen at tick " +
                                  std::to_string(stopped_at) + ")");
  const auto n = static_cast<long>(fires.size());
  c.expect(std::abs(n - 750) <= 1, std::to_string(n) + " samples, expected 750 +/- 1");
  // First fire from which the spacing is the new period.
  kernel::Tick first_new = -1;
  for (std::size_t i = 0; i + 1 < expected.size(); ++i) {
    if (expected[i] > stopped_at && expected[i + 1] - expected[i] == 10) {
      first_new = expected[i];
      break;
    }
  }
  c.expect(effective == first_new,
           "effective_from_tick " + std::to_string(effective) + " vs first new-period fire " + std::to_string(first_new));
  c.expect(summary.total_samples() == fires.size(), "summary count mismatch");
  c.note(std::to_string(n) + " samples, effective_from_tick " + std::to_string(effective));
  return c;
}

// ---- 4 -------------------------------------------------------------------------------------

Check mapping_round_trips() {
  Check c;
  auto reg = spaces::make_standard_registry(spaces::BuildingGraph({{"r", {0, 0, 0}, {1, 1, 1}}}, {}), 3);
  reg.freeze();
  const auto there = reg.resolve_mapping_path(spaces::kCelsius, spaces::kFahrenheit);
  const auto back = reg.resolve_mapping_path(spaces::kFahrenheit, spaces::kCelsius);
  auto convert = [&](double v, const std::vector<spaces::MappingStep>& path, const char* from) {
    const auto out = std::get<spaces::Payload>(reg.apply_path(spaces::Payload{spaces::Temperature{v}, from}, path));
    return std::get<spaces::Temperature>(out.value).degrees;
  };
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(-50.0, 150.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = dist(rng);
    worst = std::max(worst, std::abs(convert(convert(v, there, spaces::kCelsius), back, spaces::kFahrenheit) - v));
  }
  c.expect(worst <= 1e-9, "round-trip error " + std::to_string(worst));
  for (const auto& [cel, fah] : std::vector<std::pair<double, double>>{{0, 32}, {100, 212}, {-40, -40}}) {
    c.expect(std::abs(convert(cel, there, spaces::kCelsius) - fah) <= 1e-12, "anchor C->F " + std::to_string(cel));
    c.expect(std::abs(convert(fah, back, spaces::kFahrenheit) - cel) <= 1e-12, "anchor F->C " + std::to_string(fah));
  }
  return c;
}

// ---- 5 -------------------------------------------------------------------------------------

Check height_estimation() {
  Check c;
  const std::vector<spaces::Vec3> mics{{0.05, 1.5, 0.5}, {0.05, 1.5, 1.0}, {0.05, 1.5, 1.5}};
  const fall::SearchVolume volume{{0, 0, 0}, {5, 3, 2.5}};
  const double speed = 343.0;
  auto dist = [](const spaces::Vec3& a, const spaces::Vec3& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
  };
  double worst_error = 0.0, worst_seconds = 0.0;
  for (int k = 0; k < 15; ++k) {
    const double h = 0.1 + k * (1.8 - 0.1) / 14.0;
    for (double range : {1.0, 2.5, 4.0}) {
      const double angle = 0.25 * std::sin(1.7 * k + range);  // varied azimuth inside the room
      const spaces::Vec3 src{0.05 + range * std::cos(angle), 1.5 + range * std::sin(angle), h};
      // Forward model computed here, independently of the library.
      std::vector<double> offsets;
      for (const auto& m : mics) offsets.push_back((dist(src, m) - dist(src, mics[0])) / speed * 1e6);
      const auto start = std::chrono::steady_clock::now();
      const auto est = fall::estimate_source_height(mics, offsets, speed, volume, 0.025);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      worst_error = std::max(worst_error, std::abs(est.height_m - h));
      worst_seconds = std::max(worst_seconds, seconds);
    }
  }
  std::ostringstream note;
  note << "worst error " << worst_error << " m, slowest " << worst_seconds << " s";
  c.note(note.str());
  c.expect(worst_error <= 0.05, "worst height error " + std::to_string(worst_error) + " m");
  c.expect(worst_seconds < 1.0, "slowest estimate " + std::to_string(worst_seconds) + " s");
  return c;
}

// ---- 6 -------------------------------------------------------------------------------------

Check discrimination(const Paths& p) {
  Check c;
  int falls = 0, music = 0;
  for (const auto& file : suite_files(p)) {
    const auto name = file.stem().string();
    const auto out = p.scratch / (name + ".jsonl");
    std::string text;
    c.expect(cli_run(p, file, out, text) == 0, name + ": run failed");
    const auto alarms = alarm_lines(text);
    if (is_fall_scenario(file)) {
      ++falls;
      c.expect(alarms.size() == 1, name + ": " + std::to_string(alarms.size()) + " alarms");
      for (const auto& a : alarms) c.expect(json::parse(a)["confidence"] == "corroborated", name + ": not corroborated");
    } else {
      ++music;
      c.expect(alarms.empty(), name + ": alarm raised for music");
      // The music must actually be heard and placed above the floor threshold.
      app::Session session(app::load_app_config_file(file.string()));
      const auto outcome = session.run();
      c.expect(!outcome.detection.sounds.empty(), name + ": music not detected");
      for (const auto& s : outcome.detection.sounds) {
        c.expect(s.estimated_height_m > session.config().detector.h_floor_m, name + ": music placed at the floor");
      }
    }
    const int gate = run_command(quote(p.tana) + " eval --alarms " + quote(out) + " --scenario " + quote(file) +
                                 " --min-precision 1.0 --min-recall 1.0");
    c.expect(gate == 0, name + ": eval gate exit " + std::to_string(gate));
  }
  c.expect(falls == 3 && music == 3, "suite is not 3 falls + 3 music");
  return c;
}

// ---- 7 -------------------------------------------------------------------------------------

// Same procedure as tools/regen_golden.py: the suite with its noise section removed, seed 42.
Check noisy_regression(const Paths& p) {
  Check c;
  std::string doc;
  for (const auto& file : suite_files(p)) {
    auto scenario = json::parse(read_file(file));
    scenario.erase("noise");
    const auto name = file.stem().string();
    const auto noisy = p.scratch / (name + "_noisy.json");
    write_file(noisy, scenario.dump(2));
    std::string text;
    c.expect(cli_run(p, noisy, p.scratch / (name + "_noisy.jsonl"), text, "--seed 42") == 0, name + ": run failed");
    doc += json{{"scenario", name}}.dump() + "\n";
    for (const auto& line : alarm_lines(text)) doc += line + "\n";
  }
  c.expect(fs::exists(p.golden), "golden file missing");
  c.expect(doc == read_file(p.golden), "alarms differ from " + p.golden.filename().string());
  return c;
}

// ---- 8 -------------------------------------------------------------------------------------

Check service_contract() {
  Check c;
  app::Session session(app::load_app_config(json::parse(R"({
    "name": "contract", "seed": 5, "duration_ticks": 10000, "tick_quantum_us": 1000,
    "floorplan": {"rooms": [{"id": "den", "x_min": 0, "y_min": 0, "z_min": 0, "x_max": 4, "y_max": 4, "z_max": 3}],
                  "adjacency": []},
    "sensors": [{"sensor_id": "den-thermo", "kind": "thermometer", "scale": 0.01, "placement": {"coords": [1, 1, 1]},
                 "period_ticks": 10, "min_period_ticks": 1, "max_period_ticks": 1000}],
    "events": []
  })")));
  hub::Hub hub(session.spaces(), session.drivers(), &session.kernel(), 1000);
  hub::HubServer server(hub);
  const int port = server.bind("127.0.0.1", 0);
  c.expect(port > 0, "cannot bind");
  if (port <= 0) return c;
  server.start();

  std::vector<std::string> bodies(2);
  std::vector<std::thread> readers;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    readers.emplace_back([&, i] {
      httplib::Client client("127.0.0.1", port);
      client.set_read_timeout(60, 0);
      client.Get("/v1/stream?view=native", [&](const char* data, std::size_t n) {
        bodies[i].append(data, n);
        return true;
      });
    });
  }
  c.expect(hub.wait_for_subscribers(2, std::chrono::seconds(10)), "subscribers never connected");
  const auto outcome = session.run([&](const spaces::NormalizedSample& s) { hub.publish(s); });
  hub.set_alarms(outcome.detection.alarms);
  hub.finish(outcome.summary);
  for (auto& t : readers) t.join();

  c.expect(outcome.samples.size() == 1000, "run produced " + std::to_string(outcome.samples.size()) + " samples");
  c.expect(bodies[0] == bodies[1], "duplicate subscribers diverge");
  auto lines = lines_of(bodies[0]);
  c.expect(!lines.empty() && json::parse(lines.back())["type"] == "run_summary", "stream lacks the closing summary");
  if (!lines.empty()) lines.pop_back();
  c.expect(lines.size() == 1000, std::to_string(lines.size()) + " sample lines");
  double prev = -1.0;
  for (const auto& line : lines) {
    const double t = json::parse(line)["t_s"].get<double>();
    c.expect(t > prev, "samples out of order");
    prev = t;
  }

  httplib::Client client("127.0.0.1", port);
  std::vector<std::string> consumer{bodies[0], bodies[1]};
  for (const char* path : {"/v1/spaces", "/v1/events", "/v1/events?since=0", "/v1/stream?view=graph"}) {
    auto res = client.Get(path);
    c.expect(res && res->status == 200, std::string(path) + " failed");
    if (res) consumer.push_back(res->body);
  }
  for (const auto& body : consumer) c.expect(body.find("sensor_id") == std::string::npos, "sensor_id leaked");
  server.stop();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: acceptance TANA_BINARY SCENARIO_DIR GOLDEN_FILE SCRATCH_DIR\n";
    return 2;
  }
  const Paths paths{argv[1], argv[2], argv[3], argv[4]};
  fs::create_directories(paths.scratch);

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"scheduler exactness", scheduler_exactness},
      {"determinism", [&] { return determinism(paths); }},
      {"rate control", rate_control},
      {"mapping round trips", mapping_round_trips},
      {"height estimation", height_estimation},
      {"case-study discrimination", [&] { return discrimination(paths); }},
      {"noisy robustness", [&] { return noisy_regression(paths); }},
      {"service contract", service_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (result.passed() ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    line.precision(2);
    line << std::fixed << " (" << seconds << " s)";
    if (!result.passed()) {
      line << ": " << result.summary();
    } else if (!result.notes().empty()) {
      line << ": " << result.notes();
    }
    std::cout << line.str() << std::endl;
    if (!result.passed()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
