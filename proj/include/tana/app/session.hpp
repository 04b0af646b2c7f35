#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tana/fall/detector.hpp"
#include "tana/fall/pipeline.hpp"
#include "tana/kernel/kernel.hpp"
#include "tana/sim/scenario.hpp"
#include "tana/spaces/registry.hpp"

namespace tana::app {

/// Everything a scenario document configures: the simulation itself plus the optional
/// "detector", "views" and "search_volume" sections.
struct AppConfig {
  sim::Scenario scenario;
  fall::DetectorParams detector;
  std::vector<spaces::SubjectiveView> views;
  std::optional<fall::SearchVolume> search_volume;
};

/// Throws SchemaError / GeometryError.
AppConfig load_app_config(const nlohmann::json& document);
AppConfig load_app_config_text(const std::string& text);
AppConfig load_app_config_file(const std::string& path);

struct RunOutcome {
  kernel::RunSummary summary;
  // Normalized samples in stream order, provenance still attached.
  std::vector<spaces::NormalizedSample> samples;
  fall::PipelineResult detection;
};

/// One scenario execution: simulated drivers feeding the kernel, normalization on a consumer
/// thread behind the bounded queue, then the fall pipeline over the native view.
class Session {
 public:
  explicit Session(AppConfig config, kernel::PacingMode pacing = kernel::PacingMode::AsFastAsPossible,
                   std::size_t queue_capacity = 4096,
                   kernel::QueuePolicy queue_policy = kernel::QueuePolicy::BlockProducer);

  const AppConfig& config() const { return config_; }
  const sim::Scenario& scenario() const { return config_.scenario; }
  /// Frozen before the constructor returns.
  const spaces::SpaceRegistry& spaces() const { return spaces_; }
  const kernel::DriverRegistry& drivers() const { return drivers_; }
  kernel::AcquisitionKernel& kernel() { return *kernel_; }
  fall::PipelineConfig pipeline_config() const;

  /// Blocks until the run ends. `on_sample` sees every normalized sample in stream order.
  RunOutcome run(const std::function<void(const spaces::NormalizedSample&)>& on_sample = {});

 private:
  AppConfig config_;
  spaces::SpaceRegistry spaces_;
  kernel::DriverRegistry drivers_;
  kernel::CommandQueue commands_;
  std::unique_ptr<kernel::AcquisitionKernel> kernel_;
  std::size_t queue_capacity_;
  kernel::QueuePolicy queue_policy_;
};

nlohmann::ordered_json to_json(const kernel::RunSummary& summary);

/// The JSONL document `tana run` writes: per requested view a header line and its samples,
/// then the alarms, then the run summary.
std::string render_run_output(const Session& session, const RunOutcome& outcome,
                              const std::vector<std::string>& view_ids);

}  // namespace tana::app
