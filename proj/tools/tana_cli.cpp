// tana: run scenarios, serve the hub, evaluate alarms.

#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace tana::cli;

  // Standard output carries JSON only; diagnostics go to standard error.
  spdlog::set_default_logger(spdlog::stderr_color_mt("tana"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Tick-driven sensor hub with space normalization and fall detection"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "warn";
  app.add_option("--log", log_level, "Log level")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}))
      ->capture_default_str();

  RunOptions run;
  std::string pace = "fast";
  std::string out_path;
  std::uint64_t seed = 0;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", run.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", out_path, "Output JSONL file (default: standard output)");
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--view", run.views, "View to render; repeatable (default: native)");
    cmd->add_option("--pace", pace, "Tick pacing")->check(CLI::IsMember({"fast", "realtime"}))->capture_default_str();
  };

  auto* run_cmd = app.add_subcommand("run", "Run a scenario end to end and write JSONL");
  add_run_flags(run_cmd);

  ServeOptions serve;
  std::string listen;
  auto* serve_cmd = app.add_subcommand("serve", "Run a scenario behind the HTTP hub until interrupted");
  add_run_flags(serve_cmd);
  serve_cmd->add_option("--listen", listen, "HOST:PORT (fallback: TANA_LISTEN, then 127.0.0.1:8080)");
  serve_cmd->add_option("--await-subscribers", serve.await_subscribers,
                        "Hold the run until this many stream subscribers are connected");

  EvalOptions eval;
  double min_precision = 0.0;
  double min_recall = 0.0;
  auto* eval_cmd = app.add_subcommand("eval", "Score alarm output against scenario ground truth");
  eval_cmd->add_option("--alarms", eval.alarms_path, "JSONL with fall_alarm lines")->required();
  eval_cmd->add_option("--scenario", eval.scenario_path, "Scenario JSON file")->required();
  auto* min_p = eval_cmd->add_option("--min-precision", min_precision, "Exit 5 below this precision");
  auto* min_r = eval_cmd->add_option("--min-recall", min_recall, "Exit 5 below this recall");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : kExitSchema;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  auto finish_run_options = [&](CLI::App* cmd) {
    if (cmd->count("--out")) run.output_path = out_path;
    if (cmd->count("--seed")) run.seed = seed;
    run.realtime = pace == "realtime";
  };

  if (*run_cmd) {
    finish_run_options(run_cmd);
    return cmd_run(run);
  }
  if (*serve_cmd) {
    finish_run_options(serve_cmd);
    serve.run = run;
    if (serve_cmd->count("--listen")) serve.listen = listen;
    return cmd_serve(serve);
  }
  if (min_p->count()) eval.min_precision = min_precision;
  if (min_r->count()) eval.min_recall = min_recall;
  return cmd_eval(eval);
}
