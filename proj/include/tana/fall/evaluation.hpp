#pragma once

#include <vector>

#include "json.hpp"
#include "tana/fall/detector.hpp"
#include "tana/sim/scenario.hpp"

namespace tana::fall {

struct EvaluationReport {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double precision = 1.0;
  double recall = 1.0;
};

/// Greedy, time-ordered, one-to-one matching of alarms to fall truths within
/// match_window_s. Non-fall truth records are ignored. Empty denominators count as 1.0.
EvaluationReport evaluate_against_truth(const std::vector<FallAlarm>& alarms,
                                        const std::vector<sim::TruthRecord>& truth, double match_window_s = 2.0);

nlohmann::ordered_json to_json(const EvaluationReport& report);
/// {"type":"fall_alarm","t_s","entity","confidence","room"}
nlohmann::ordered_json to_json(const FallAlarm& alarm);
/// Inverse of to_json(FallAlarm). Throws SchemaError.
FallAlarm alarm_from_json(const nlohmann::json& line);

}  // namespace tana::fall
