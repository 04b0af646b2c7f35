#include "tana/app/session.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "tana/error.hpp"
#include "tana/fall/evaluation.hpp"
#include "tana/sim/synth.hpp"
#include "tana/spaces/normalize.hpp"
#include "tana/spaces/standard.hpp"
#include "tana/spaces/wire.hpp"

namespace tana::app {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::SchemaError, path + " (" + reason + ")");
}

fall::DetectorParams parse_detector(const json& doc) {
  fall::DetectorParams p;
  auto it = doc.find("detector");
  if (it == doc.end() || it->is_null()) return p;
  if (!it->is_object()) schema_error("detector", "expected object");
  const json& d = *it;
  auto num = [&](const char* key, double& target) {
    if (!d.contains(key)) return;
    if (!d[key].is_number()) schema_error(std::string("detector.") + key, "expected number");
    target = d[key].get<double>();
  };
  num("theta_freefall_g", p.theta_freefall_g);
  num("d_freefall_ms", p.d_freefall_ms);
  num("theta_impact_g", p.theta_impact_g);
  num("max_gap_ms", p.max_gap_ms);
  num("theta_loud_db", p.theta_loud_db);
  num("refractory_ms", p.refractory_ms);
  num("h_floor_m", p.h_floor_m);
  num("fuse_window_s", p.fuse_window_s);
  num("grid_resolution_m", p.grid_resolution_m);
  if (d.contains("accel_only_policy")) {
    const auto policy = d["accel_only_policy"].is_string() ? d["accel_only_policy"].get<std::string>() : "";
    if (policy == "suspected") p.accel_only_policy = fall::AccelOnlyPolicy::Suspected;
    else if (policy == "suppressed") p.accel_only_policy = fall::AccelOnlyPolicy::Suppressed;
    else schema_error("detector.accel_only_policy", "expected suspected or suppressed");
  }
  try {
    fall::validate(p);
  } catch (const Error& e) {
    schema_error("detector." + e.detail(), "invalid detector parameter");
  }
  return p;
}

std::vector<spaces::SubjectiveView> parse_views(const json& doc) {
  std::vector<spaces::SubjectiveView> views;
  auto it = doc.find("views");
  if (it == doc.end() || it->is_null()) return views;
  if (!it->is_array()) schema_error("views", "expected array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string path = "views[" + std::to_string(i) + "]";
    const json& v = (*it)[i];
    if (!v.is_object() || !v.contains("view_id") || !v["view_id"].is_string()) schema_error(path + ".view_id", "required");
    spaces::SubjectiveView view;
    view.view_id = v["view_id"].get<std::string>();
    view.physical_space_id = v.value("physical_space", std::string(spaces::kRoomCartesian));
    if (v.contains("values")) {
      if (!v["values"].is_object()) schema_error(path + ".values", "expected object");
      for (const auto& [kind_text, space] : v["values"].items()) {
        auto kind = spaces::payload_kind_from_string(kind_text);
        if (!kind || !space.is_string()) schema_error(path + ".values." + kind_text, "unknown payload kind");
        view.value_spaces[*kind] = space.get<std::string>();
      }
    }
    views.push_back(std::move(view));
  }
  return views;
}

std::optional<fall::SearchVolume> parse_search_volume(const json& doc) {
  auto it = doc.find("search_volume");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  auto vec = [&](const char* key) {
    const std::string path = std::string("search_volume.") + key;
    if (!it->is_object() || !it->contains(key)) schema_error(path, "required");
    const json& a = (*it)[key];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number()) {
      schema_error(path, "expected [x, y, z]");
    }
    return spaces::Vec3{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  };
  fall::SearchVolume v{vec("min"), vec("max")};
  if (!(v.max.x > v.min.x && v.max.y > v.min.y && v.max.z > v.min.z)) schema_error("search_volume", "empty volume");
  return v;
}

}  // namespace

AppConfig load_app_config(const json& document) {
  AppConfig cfg;
  cfg.scenario = sim::load_scenario(document);
  try {
    cfg.detector = parse_detector(document);
    cfg.views = parse_views(document);
    cfg.search_volume = parse_search_volume(document);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("$ (") + e.what() + ")");
  }
  return cfg;
}

AppConfig load_app_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("$ (") + e.what() + ")");
  }
  return load_app_config(doc);
}

AppConfig load_app_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_app_config_text(ss.str());
}

Session::Session(AppConfig config, kernel::PacingMode pacing, std::size_t queue_capacity,
                 kernel::QueuePolicy queue_policy)
    : config_(std::move(config)), queue_capacity_(queue_capacity), queue_policy_(queue_policy) {
  const auto& sc = config_.scenario;
  const auto* mic = sc.mic_array_sensor();
  spaces_ = spaces::make_standard_registry(sc.floorplan, mic ? mic->descriptor.channel_count : 0);
  for (const auto& view : config_.views) {
    try {
      spaces_.register_view(view);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaError, "views." + view.view_id + " (" + e.detail() + ")");
    }
  }
  spaces_.freeze();

  const auto entries = sim::attach_drivers(sc, drivers_);
  auto schedule = kernel::build_schedule(entries, drivers_);
  for (const auto& cmd : sc.rate_commands) commands_.submit(cmd);
  kernel_ = std::make_unique<kernel::AcquisitionKernel>(
      drivers_, std::move(schedule), kernel::TickClock{0, sc.tick_quantum_us, pacing});
}

fall::PipelineConfig Session::pipeline_config() const {
  fall::PipelineConfig pc;
  pc.params = config_.detector;
  pc.floorplan = config_.scenario.floorplan;
  if (const auto* mic = config_.scenario.mic_array_sensor()) {
    pc.mic_positions = mic->mic_array->mic_positions;
    pc.speed_of_sound_mps = mic->mic_array->speed_of_sound_mps;
  }
  if (config_.search_volume) {
    pc.search_volume = *config_.search_volume;
  } else {
    const auto box = config_.scenario.floorplan.bounds();
    pc.search_volume = {box.min, box.max};
  }
  return pc;
}

RunOutcome Session::run(const std::function<void(const spaces::NormalizedSample&)>& on_sample) {
  RunOutcome outcome;
  kernel::BoundedQueue<kernel::StreamRecord> queue(queue_capacity_, queue_policy_);
  std::exception_ptr producer_error;
  std::thread producer([&] {
    try {
      kernel_->run_into(config_.scenario.duration_ticks, queue, &commands_);
    } catch (...) {
      producer_error = std::current_exception();
    }
  });

  std::exception_ptr consumer_error;
  while (auto record = queue.pop()) {
    if (consumer_error) continue;  // keep draining so the producer never blocks
    try {
      if (auto* summary = std::get_if<kernel::RunSummary>(&*record)) {
        outcome.summary = *summary;
        continue;
      }
      const auto& raw = std::get<kernel::RawSample>(*record);
      if (raw.status != kernel::SampleStatus::Ok) continue;
      auto sample = spaces::normalize_sample(raw, drivers_.descriptor(raw.sensor_id), config_.scenario.tick_quantum_us);
      if (on_sample) on_sample(sample);
      outcome.samples.push_back(std::move(sample));
    } catch (...) {
      consumer_error = std::current_exception();
      kernel_->request_stop();
    }
  }
  producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  if (consumer_error) std::rethrow_exception(consumer_error);

  const auto& native = spaces_.view(spaces::kNativeView);
  std::vector<spaces::NormalizedSample> viewed;
  viewed.reserve(outcome.samples.size());
  for (const auto& s : outcome.samples) viewed.push_back(spaces::apply_view(s, native, spaces_));
  outcome.detection = fall::run_fall_pipeline(viewed, pipeline_config());
  return outcome;
}

nlohmann::ordered_json to_json(const kernel::RunSummary& summary) {
  nlohmann::ordered_json out;
  out["type"] = "run_summary";
  out["ticks_elapsed"] = summary.ticks_elapsed;
  out["samples_per_sensor"] = summary.samples_per_sensor;
  out["faults_per_sensor"] = summary.faults_per_sensor;
  return out;
}

std::string render_run_output(const Session& session, const RunOutcome& outcome,
                              const std::vector<std::string>& view_ids) {
  std::string out;
  for (const auto& id : view_ids) {
    const auto& view = session.spaces().view(id);
    nlohmann::ordered_json header;
    header["type"] = "view";
    header["view"] = id;
    header["samples"] = outcome.samples.size();
    out += header.dump() + "\n";
    for (const auto& s : outcome.samples) out += spaces::to_wire_line(spaces::apply_view(s, view, session.spaces())) + "\n";
  }
  for (const auto& alarm : outcome.detection.alarms) out += fall::to_json(alarm).dump() + "\n";
  out += to_json(outcome.summary).dump() + "\n";
  return out;
}

}  // namespace tana::app
