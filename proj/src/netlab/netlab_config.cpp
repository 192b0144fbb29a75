#include "twtt/netlab/netlab_config.hpp"

#include <stdexcept>

#include "twtt/config.hpp"

namespace twtt::netlab {

namespace jf = twtt::json_field;
using nlohmann::json;

namespace {

Endpoint endpoint(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw std::invalid_argument(std::string("config field '") + key + "': required");
  }
  try {
    return parse_endpoint(jf::string(doc[key], key));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
  }
}

std::chrono::milliseconds millis(const json& doc, const char* key,
                                 std::chrono::milliseconds fallback) {
  if (!doc.contains(key)) return fallback;
  const auto v = jf::integer(doc[key], key);
  if (v < 0) throw std::invalid_argument(std::string("config field '") + key + "': must be >= 0");
  return std::chrono::milliseconds(v);
}

}  // namespace

NodeSetup node_setup_from_json(const json& doc) {
  jf::reject_unknown(doc, {"role", "bind", "proxy", "timeout_ms", "retry_ms", "preset", "scenario"},
                     "");
  NodeSetup s;
  if (!doc.contains("role")) throw std::invalid_argument("config field 'role': required");
  try {
    s.node.role = parse_role(jf::string(doc["role"], "role"));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config field 'role': ") + e.what());
  }
  s.bind = endpoint(doc, "bind");
  s.proxy = endpoint(doc, "proxy");
  s.node.epoch_timeout = millis(doc, "timeout_ms", s.node.epoch_timeout);
  s.node.retry_interval = millis(doc, "retry_ms", s.node.retry_interval);
  ScenarioConfig base;
  if (doc.contains("preset")) base = preset(jf::string(doc["preset"], "preset"));
  s.node.scenario = doc.contains("scenario") ? scenario_from_json(doc["scenario"], base) : base;
  return s;
}

ProxySetup proxy_setup_from_json(const json& doc) {
  jf::reject_unknown(doc,
                     {"listen_a", "listen_b", "node_a", "node_b", "seed", "base_delay",
                      "direction", "schedule", "idle_timeout_ms", "startup_timeout_ms",
                      "real_sleep"},
                     "");
  ProxySetup s;
  s.listen_a = endpoint(doc, "listen_a");
  s.listen_b = endpoint(doc, "listen_b");
  s.node_a = endpoint(doc, "node_a");
  s.node_b = endpoint(doc, "node_b");
  if (doc.contains("seed")) {
    const auto seed = jf::integer(doc["seed"], "seed");
    if (seed < 0) throw std::invalid_argument("config field 'seed': must be >= 0");
    s.options.seed = static_cast<std::uint64_t>(seed);
  }
  if (doc.contains("base_delay")) {
    s.policy.base_delay = jf::picoseconds(doc["base_delay"], "base_delay");
  }
  if (doc.contains("direction")) {
    try {
      s.policy.direction = parse_direction(jf::string(doc["direction"], "direction"));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("config field 'direction': ") + e.what());
    }
  }
  if (doc.contains("schedule")) {
    s.policy.schedule = schedule_from_json(doc["schedule"], s.policy.direction, "schedule");
  }
  s.options.idle_timeout = millis(doc, "idle_timeout_ms", s.options.idle_timeout);
  s.options.startup_timeout = millis(doc, "startup_timeout_ms", s.options.startup_timeout);
  if (doc.contains("real_sleep")) s.options.real_sleep = jf::boolean(doc["real_sleep"], "real_sleep");
  validate(s.policy.schedule);
  return s;
}

}  // namespace twtt::netlab
