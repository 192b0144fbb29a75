#pragma once

#include <string>

#include <json.hpp>

#include "twtt/harness.hpp"

namespace twtt {

// JSON scenario documents mirror ScenarioConfig field names. Time-valued
// fields are integer picoseconds; sigma_gamma and initial_gamma are in ps/s
// (units of 1e-12). Keys that are absent keep the value from `base`; unknown
// keys are rejected with the offending path in the message.
ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const ScenarioConfig& base = ScenarioConfig{});
nlohmann::json scenario_to_json(const ScenarioConfig& config);

AttackSchedule schedule_from_json(const nlohmann::json& doc,
                                  Direction default_direction,
                                  const std::string& path);
nlohmann::json schedule_to_json(const AttackSchedule& schedule);

// Reads a JSON file. Relative paths that do not exist are retried under the
// directory named by $TWTT_CONFIG_DIR.
nlohmann::json load_json_file(const std::string& path);

// Helpers shared by the netlab config readers.
namespace json_field {

void reject_unknown(const nlohmann::json& obj,
                    std::initializer_list<const char*> allowed,
                    const std::string& path);
double picoseconds(const nlohmann::json& v, const std::string& path);
std::int64_t integer(const nlohmann::json& v, const std::string& path);
double number(const nlohmann::json& v, const std::string& path);
std::string string(const nlohmann::json& v, const std::string& path);
bool boolean(const nlohmann::json& v, const std::string& path);

}  // namespace json_field

}  // namespace twtt
