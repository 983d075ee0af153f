#include "chshsim/serialize.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "chshsim/errors.hpp"
#include "chshsim/rng.hpp"

namespace chshsim {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

json angles_to_json(const std::vector<Angle>& angles) {
  json out = json::array();
  for (auto a : angles) out.push_back(a.radians());
  return out;
}

}  // namespace

Side parse_side(const std::string& text) {
  if (text == "alice" || text == "Alice") return Side::Alice;
  if (text == "bob" || text == "Bob") return Side::Bob;
  throw ConfigError("conditioning side must be 'alice' or 'bob', got '" + text + "'");
}

ExperimentConfig parse_config(const json& j, bool degrees) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  // A run manifest embeds the config it was produced from.
  if (j.contains("config") && j.contains("tool")) {
    return parse_config(j.at("config"), false);
  }
  ExperimentConfig c;
  try {
    c.model = get_or<std::string>(j, "model", c.model);
    if (!j.contains("trials")) {
      throw ConfigError("config: 'trials' is required");
    }
    const auto& trials = j.at("trials");
    if (!trials.is_number_integer() || (!trials.is_number_unsigned() && trials.get<std::int64_t>() < 0)) {
      throw ConfigError("config: 'trials' must be a non-negative integer");
    }
    c.trials = trials.get<std::uint64_t>();
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.chunk_size = get_or<std::uint64_t>(j, "chunk_size", c.chunk_size);
    c.conditioning_side = parse_side(get_or<std::string>(j, "conditioning_side", "alice"));
    if (j.contains("settings")) {
      const auto& s = j.at("settings");
      const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
      auto angle = [&](const char* key, Angle fallback) {
        return s.contains(key) ? Angle(scale * s.at(key).get<double>()) : fallback;
      };
      const Settings defaults = Settings::chsh_optimal();
      c.settings = Settings{angle("a1", defaults.a1), angle("a2", defaults.a2), angle("b1", defaults.b1),
                            angle("b2", defaults.b2)};
    }
    if (j.contains("pair_probabilities")) {
      const auto& p = j.at("pair_probabilities");
      if (!p.is_array() || p.size() != 4) {
        throw ConfigError("config: 'pair_probabilities' must be an array of four numbers (11, 12, 21, 22)");
      }
      for (std::size_t i = 0; i < 4; ++i) c.pair_probabilities[i] = p.at(i).get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, bool degrees) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j, degrees);
}

json to_json(const ExperimentConfig& c) {
  return json{{"model", c.model},
              {"settings",
               {{"a1", c.settings.a1.radians()},
                {"a2", c.settings.a2.radians()},
                {"b1", c.settings.b1.radians()},
                {"b2", c.settings.b2.radians()}}},
              {"pair_probabilities", c.pair_probabilities},
              {"trials", c.trials},
              {"seed", c.seed},
              {"conditioning_side", to_string(c.conditioning_side)},
              {"chunk_size", c.chunk_size}};
}

json to_json(const CorrelationEstimate& e) {
  return json{{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}};
}

json to_json(const ChshReport& r) {
  json correlations = json::object();
  for (const auto& e : r.correlations) correlations[e.pair.label()] = to_json(e);
  return json{{"correlations", correlations}, {"s_value", r.s_value}, {"s_std_error", r.s_std_error}};
}

json report_document(const ChshReport& report, const ExperimentConfig& config) {
  json doc = to_json(report);
  doc["config"] = to_json(config);
  doc["rng"] = json{{"algorithm", std::string(kRngAlgorithm)}, {"seed", config.seed}};
  return doc;
}

json to_json(const ConditioningContext& context) {
  json j{{"kind", "unconditioned"}};
  if (std::holds_alternative<OnAliceSetting>(context)) j["kind"] = "alice";
  if (std::holds_alternative<OnBobSetting>(context)) j["kind"] = "bob";
  if (auto a = conditioning_angle(context)) j["setting"] = a->radians();
  return j;
}

json to_json(const MiDiagnostic& d) {
  return json{{"first", to_json(d.first)},
              {"second", to_json(d.second)},
              {"tv_distance", d.tv_distance},
              {"mi_respected", d.mi_respected}};
}

json to_json(const CfFreedomReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(json{{"pair", p.pair.label()},
                         {"context", to_json(p.context)},
                         {"zero_set", angles_to_json(p.zero_set)},
                         {"exact", p.exact}});
  }
  return json{{"model", r.model},
              {"applicable", r.applicable},
              {"pairs", pairs},
              {"required_unconditional_zeros", angles_to_json(r.required_unconditional_zeros)},
              {"excluded_measure", r.excluded_measure},
              {"cf_respected", r.cf_respected},
              {"note", r.note}};
}

json to_json(const RegularityReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"first", e.first.label()},
                           {"second", e.second.label()},
                           {"first_count", e.first_count},
                           {"second_count", e.second_count},
                           {"sup_distance", e.sup_distance},
                           {"threshold", e.threshold},
                           {"passed", e.passed}});
  }
  return json{{"entries", entries}, {"all_passed", r.all_passed}};
}

}  // namespace chshsim
