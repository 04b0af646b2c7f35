#include "tana/fall/evaluation.hpp"

#include <cmath>

#include "tana/error.hpp"

namespace tana::fall {

EvaluationReport evaluate_against_truth(const std::vector<FallAlarm>& alarms,
                                        const std::vector<sim::TruthRecord>& truth, double match_window_s) {
  std::vector<double> falls;
  for (const auto& t : truth) {
    if (t.kind == sim::EventKind::Fall) falls.push_back(t.time_s);
  }
  std::vector<bool> matched(falls.size(), false);

  EvaluationReport report;
  for (const auto& alarm : alarms) {
    bool hit = false;
    for (std::size_t i = 0; i < falls.size(); ++i) {
      if (matched[i] || std::abs(alarm.t_s - falls[i]) > match_window_s + 1e-9) continue;
      matched[i] = true;
      hit = true;
      break;
    }
    hit ? ++report.true_positives : ++report.false_positives;
  }
  for (bool m : matched) {
    if (!m) ++report.false_negatives;
  }
  const int predicted = report.true_positives + report.false_positives;
  const int actual = report.true_positives + report.false_negatives;
  report.precision = predicted == 0 ? 1.0 : static_cast<double>(report.true_positives) / predicted;
  report.recall = actual == 0 ? 1.0 : static_cast<double>(report.true_positives) / actual;
  return report;
}

nlohmann::ordered_json to_json(const EvaluationReport& report) {
  nlohmann::ordered_json out;
  out["true_positives"] = report.true_positives;
  out["false_positives"] = report.false_positives;
  out["false_negatives"] = report.false_negatives;
  out["precision"] = report.precision;
  out["recall"] = report.recall;
  return out;
}

nlohmann::ordered_json to_json(const FallAlarm& alarm) {
  nlohmann::ordered_json out;
  out["type"] = "fall_alarm";
  out["t_s"] = alarm.t_s;
  out["entity"] = alarm.entity_id;
  out["confidence"] = to_string(alarm.confidence);
  out["room"] = alarm.room ? nlohmann::ordered_json(*alarm.room) : nlohmann::ordered_json(nullptr);
  return out;
}

FallAlarm alarm_from_json(const nlohmann::json& line) {
  try {
    if (line.value("type", "") != "fall_alarm") throw Error(ErrorCode::SchemaError, "type");
    FallAlarm alarm;
    alarm.t_s = line.at("t_s").get<double>();
    alarm.entity_id = line.at("entity").get<std::string>();
    const auto confidence = line.at("confidence").get<std::string>();
    if (confidence == "corroborated") alarm.confidence = Confidence::Corroborated;
    else if (confidence == "accel_only") alarm.confidence = Confidence::AccelOnly;
    else throw Error(ErrorCode::SchemaError, "confidence");
    if (line.contains("room") && !line["room"].is_null()) alarm.room = line["room"].get<std::string>();
    return alarm;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("fall_alarm (") + e.what() + ")");
  }
}

}  // namespace tana::fall
