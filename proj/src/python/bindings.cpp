#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tana/app/session.hpp"
#include "tana/error.hpp"
#include "tana/fall/evaluation.hpp"
#include "tana/fall/localization.hpp"
#include "tana/hub/hub.hpp"
#include "tana/kernel/schedule.hpp"
#include "tana/spaces/standard.hpp"

namespace py = pybind11;
using namespace tana;

namespace {

using Point = std::array<double, 3>;

spaces::Vec3 vec(const Point& p) { return {p[0], p[1], p[2]}; }

std::vector<spaces::Vec3> vecs(const std::vector<Point>& points) {
  std::vector<spaces::Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(vec(p));
  return out;
}

// Runs a scenario document end to end and returns the `tana run` JSONL.
std::string run_scenario(const std::string& scenario_json, const std::vector<std::string>& views,
                         std::optional<std::uint64_t> seed) {
  auto config = app::load_app_config_text(scenario_json);
  if (seed) config.scenario.seed = *seed;
  app::Session session(std::move(config));
  for (const auto& v : views) {
    if (!session.spaces().has_view(v)) throw Error(ErrorCode::UnknownView, v);
  }
  const auto outcome = session.run();
  return app::render_run_output(session, outcome, views);
}

std::string evaluate(const std::string& alarms_jsonl, const std::string& scenario_json) {
  const auto scenario = app::load_app_config_text(scenario_json).scenario;
  std::vector<fall::FallAlarm> alarms;
  std::istringstream in(alarms_jsonl);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::SchemaError, "alarm line is not a JSON object");
    if (j.value("type", "") == "fall_alarm") alarms.push_back(fall::alarm_from_json(j));
  }
  return fall::to_json(fall::evaluate_against_truth(alarms, sim::ground_truth_events(scenario))).dump();
}

}  // namespace

PYBIND11_MODULE(_tana, m) {
  m.doc() = "Native core of the tana sensor hub";

  // Kept alive for the interpreter's lifetime; instances carry `code` and `detail`.
  static py::handle error_type = py::exception<Error>(m, "TanaError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      err.attr("detail") = e.detail();
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  m.def("run_scenario", &run_scenario, py::arg("scenario_json"), py::arg("views") = std::vector<std::string>{"native"},
        py::arg("seed") = std::nullopt, py::call_guard<py::gil_scoped_release>(),
        "Run a scenario document and return the JSONL `tana run` would write.");
  m.def("evaluate", &evaluate, py::arg("alarms_jsonl"), py::arg("scenario_json"),
        "Score alarm lines against a scenario's ground truth; returns the report as JSON text.");

  m.def("celsius_to_fahrenheit", &spaces::celsius_to_fahrenheit, py::arg("degrees_c"));
  m.def("fahrenheit_to_celsius", &spaces::fahrenheit_to_celsius, py::arg("degrees_f"));

  m.def("expected_sample_count", &kernel::expected_sample_count, py::arg("period_ticks"), py::arg("phase_ticks"),
        py::arg("duration_ticks"));
  m.def(
      "next_fire_tick",
      [](kernel::Tick period, kernel::Tick phase, kernel::Tick now) {
        return kernel::next_fire_tick({"", period, phase, true}, now);
      },
      py::arg("period_ticks"), py::arg("phase_ticks"), py::arg("now"));
  m.def("period_for_rate", &hub::period_for_rate, py::arg("rate_hz"), py::arg("tick_quantum_us") = 1000);

  m.def(
      "predicted_offsets_us",
      [](const std::vector<Point>& mics, const Point& source, double speed) {
        return fall::predicted_offsets_us(vecs(mics), vec(source), speed);
      },
      py::arg("mics"), py::arg("source"), py::arg("speed_of_sound_mps") = 343.0);
  m.def(
      "estimate_source_height",
      [](const std::vector<Point>& mics, const std::vector<double>& offsets, const Point& lo, const Point& hi,
         double resolution, double speed) {
        const auto mic_positions = vecs(mics);
        fall::HeightEstimate est;
        {
          py::gil_scoped_release release;
          est = fall::estimate_source_height(mic_positions, offsets, speed, {vec(lo), vec(hi)}, resolution);
        }
        return py::make_tuple(est.height_m, est.residual_us);
      },
      py::arg("mics"), py::arg("offsets_us"), py::arg("volume_min"), py::arg("volume_max"),
      py::arg("grid_resolution_m") = 0.025, py::arg("speed_of_sound_mps") = 343.0,
      "Grid-search height estimate; returns (height_m, residual_us).");
}
