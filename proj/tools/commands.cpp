#include "commands.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "tana/app/session.hpp"
#include "tana/error.hpp"
#include "tana/fall/evaluation.hpp"
#include "tana/hub/hub.hpp"
#include "tana/hub/server.hpp"

namespace tana::cli {
namespace {

constexpr const char* kDefaultListen = "127.0.0.1:8080";

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::GeometryError:
    case ErrorCode::UnknownEntity:
    case ErrorCode::InvalidDescriptor:
    case ErrorCode::DuplicateSensorId:
    case ErrorCode::DuplicateEntry:
    case ErrorCode::PeriodOutOfBounds:
    case ErrorCode::InvalidPhase:
    case ErrorCode::InvalidFloorplan:
    case ErrorCode::UnknownView:
    case ErrorCode::UnknownSpace:
    case ErrorCode::DuplicateSpaceId:
      return true;
    default:
      return false;
  }
}

// Loads and validates everything a run needs before any output is produced.
std::optional<app::AppConfig> load_config(const RunOptions& options) {
  try {
    auto config = app::load_app_config_file(options.scenario_path);
    if (options.seed) config.scenario.seed = *options.seed;
    return config;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return std::nullopt;
  }
}

std::vector<std::string> requested_views(const RunOptions& options) {
  return options.views.empty() ? std::vector<std::string>{"native"} : options.views;
}

bool check_views(const app::Session& session, const std::vector<std::string>& views) {
  for (const auto& v : views) {
    if (!session.spaces().has_view(v)) {
      spdlog::error("{}: {}", to_string(ErrorCode::UnknownView), v);
      return false;
    }
  }
  return true;
}

// Writes through a sibling temporary so a failed run never leaves a partial file behind.
void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::optional<std::string>& path, const std::string& content) {
  if (path) {
    write_file(*path, content);
  } else {
    std::cout << content << std::flush;
  }
}

kernel::PacingMode pacing(const RunOptions& options) {
  return options.realtime ? kernel::PacingMode::RealTimePaced : kernel::PacingMode::AsFastAsPossible;
}

}  // namespace

int cmd_run(const RunOptions& options) {
  auto config = load_config(options);
  if (!config) return kExitSchema;
  const auto views = requested_views(options);

  std::unique_ptr<app::Session> session;
  try {
    session = std::make_unique<app::Session>(std::move(*config), pacing(options));
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return is_input_error(e.code()) ? kExitSchema : kExitRuntime;
  }
  if (!check_views(*session, views)) return kExitSchema;

  try {
    spdlog::info("running scenario '{}' for {} ticks", session->scenario().name, session->scenario().duration_ticks);
    const auto outcome = session->run();
    spdlog::info("{} samples, {} alarms", outcome.samples.size(), outcome.detection.alarms.size());
    emit(options.output_path, app::render_run_output(*session, outcome, views));
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_serve(const ServeOptions& options) {
  // Signals are taken by a dedicated thread; every thread started later inherits the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);  // internal wake-up for the signal thread
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto config = load_config(options.run);
  if (!config) return kExitSchema;
  const auto views = requested_views(options.run);

  std::string listen_text = kDefaultListen;
  if (options.listen) {
    listen_text = *options.listen;
  } else if (const char* env = std::getenv("TANA_LISTEN"); env && *env) {
    listen_text = env;
  }
  const auto address = hub::parse_listen_address(listen_text);
  if (!address) {
    spdlog::error("malformed listen address '{}'", listen_text);
    return kExitSchema;
  }

  std::unique_ptr<app::Session> session;
  try {
    session = std::make_unique<app::Session>(std::move(*config), pacing(options.run));
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return is_input_error(e.code()) ? kExitSchema : kExitRuntime;
  }
  if (!check_views(*session, views)) return kExitSchema;

  hub::Hub hub(session->spaces(), session->drivers(), &session->kernel(), session->scenario().tick_quantum_us);
  hub::HubServer server(hub);
  const int port = server.bind(address->host, address->port);
  if (port < 0) {
    spdlog::error("cannot bind {}", listen_text);
    return kExitBind;
  }
  server.start();
  std::cout << nlohmann::ordered_json{{"type", "listening"}, {"host", address->host}, {"port", port}}.dump()
            << std::endl;
  spdlog::info("listening on {}:{}", address->host, port);

  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  std::atomic<bool> stop{false};
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (sig == SIGUSR1) return;
    spdlog::info("signal {} received, shutting down", sig);
    {
      std::lock_guard lock(stop_mutex);
      stop = true;
    }
    session->kernel().request_stop();
    stop_cv.notify_all();
  });

  int exit_code = kExitOk;
  while (!stop && hub.subscriber_count() < options.await_subscribers) {
    hub.wait_for_subscribers(options.await_subscribers, std::chrono::milliseconds(100));
  }
  if (!stop) {
    try {
      const auto outcome = session->run([&hub](const spaces::NormalizedSample& s) { hub.publish(s); });
      hub.set_alarms(outcome.detection.alarms);
      hub.finish(outcome.summary);
      spdlog::info("run finished: {} samples, {} alarms", outcome.samples.size(), outcome.detection.alarms.size());
      if (options.run.output_path) emit(options.run.output_path, app::render_run_output(*session, outcome, views));
    } catch (const std::exception& e) {
      spdlog::error("{}", e.what());
      hub.finish(kernel::RunSummary{});
      exit_code = kExitRuntime;
    }
  }
  if (exit_code == kExitOk) {
    std::unique_lock lock(stop_mutex);
    stop_cv.wait(lock, [&] { return stop.load(); });
  }
  if (!hub.finished()) hub.finish(kernel::RunSummary{});
  // Give open streams a moment to drain their terminal line before the sockets close.
  for (int i = 0; i < 50 && hub.subscriber_count() > 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  server.stop();
  if (!stop) pthread_kill(watcher.native_handle(), SIGUSR1);
  watcher.join();
  return exit_code;
}

int cmd_eval(const EvalOptions& options) {
  sim::Scenario scenario;
  try {
    scenario = app::load_app_config_file(options.scenario_path).scenario;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitSchema;
  }

  std::vector<fall::FallAlarm> alarms;
  std::ifstream in(options.alarms_path);
  if (!in) {
    spdlog::error("cannot read alarms file {}", options.alarms_path);
    return kExitSchema;
  }
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      spdlog::error("{}:{}: not a JSON object", options.alarms_path, lineno);
      return kExitSchema;
    }
    // Run output can be fed in directly; only alarm lines count.
    if (j.value("type", "") != "fall_alarm") continue;
    try {
      alarms.push_back(fall::alarm_from_json(j));
    } catch (const Error& e) {
      spdlog::error("{}:{}: {}", options.alarms_path, lineno, e.what());
      return kExitSchema;
    }
  }

  const auto report = fall::evaluate_against_truth(alarms, sim::ground_truth_events(scenario));
  std::cout << fall::to_json(report).dump() << std::endl;
  const bool precision_ok = !options.min_precision || report.precision >= *options.min_precision;
  const bool recall_ok = !options.min_recall || report.recall >= *options.min_recall;
  return precision_ok && recall_ok ? kExitOk : kExitGate;
}

}  // namespace tana::cli
