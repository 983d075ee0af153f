#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "chshsim/estimators.hpp"
#include "chshsim/experiment.hpp"
#include "chshsim/quadrature.hpp"

namespace chshsim {

/// Parse an experiment config:
///
///   {"model": "feldmann",
///    "settings": {"a1": 0, "a2": 1.5708, "b1": 0.7854, "b2": 2.3562},
///    "pair_probabilities": [0.25, 0.25, 0.25, 0.25],
///    "trials": 1000000, "seed": 42,
///    "conditioning_side": "alice", "chunk_size": 65536}
///
/// Everything except "trials" has a default. Angles are radians unless
/// `degrees` is set. Throws ConfigError; the result is validated.
ExperimentConfig parse_config(const nlohmann::json& j, bool degrees = false);
ExperimentConfig load_config(const std::string& path, bool degrees = false);

/// Canonical echo of a config (angles in normalized radians).
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json to_json(const CorrelationEstimate& estimate);
/// Per-pair {mean, std_error, count}, s_value and s_std_error.
nlohmann::json to_json(const ChshReport& report);
/// Report plus config echo and RNG metadata, as written to report.json.
nlohmann::json report_document(const ChshReport& report, const ExperimentConfig& config);

nlohmann::json to_json(const ConditioningContext& context);
nlohmann::json to_json(const MiDiagnostic& diagnostic);
nlohmann::json to_json(const CfFreedomReport& report);
nlohmann::json to_json(const RegularityReport& report);

Side parse_side(const std::string& text);

}  // namespace chshsim
