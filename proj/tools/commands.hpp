#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tana::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitBind = 4;
inline constexpr int kExitGate = 5;

struct RunOptions {
  std::string scenario_path;
  std::optional<std::string> output_path;  // stdout when unset
  std::optional<std::uint64_t> seed;
  std::vector<std::string> views;  // "native" when empty
  bool realtime = false;
};

struct ServeOptions {
  RunOptions run;
  std::optional<std::string> listen;  // falls back to TANA_LISTEN, then 127.0.0.1:8080
  std::size_t await_subscribers = 0;
};

struct EvalOptions {
  std::string alarms_path;
  std::string scenario_path;
  std::optional<double> min_precision;
  std::optional<double> min_recall;
};

int cmd_run(const RunOptions& options);
int cmd_serve(const ServeOptions& options);
int cmd_eval(const EvalOptions& options);

}  // namespace tana::cli
