#include "twtt/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "twtt/units.hpp"

namespace twtt {

using nlohmann::json;

namespace json_field {

namespace {
[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config field '" + path + "': " + what);
}
}  // namespace

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& path) {
  if (!obj.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) {
      throw std::invalid_argument("unknown config key '" +
                                  (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

std::int64_t integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) bad(path, "integer too large");
    return static_cast<std::int64_t>(u);
  }
  bad(path, "expected an integer");
}

double picoseconds(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    bad(path, "expected integer picoseconds");
  }
  return ps_to_seconds(integer(v, path));
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) bad(path, "expected true or false");
  return v.get<bool>();
}

}  // namespace json_field

namespace jf = json_field;

namespace {

template <typename Fn>
auto wrap(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind("config field", 0) == 0 || msg.rfind("unknown config key", 0) == 0) {
      throw;
    }
    throw std::invalid_argument("config field '" + path + "': " + msg);
  }
}

std::int64_t ps(double seconds) { return seconds_to_ps(seconds); }

// ps/s per unit skew.
constexpr double kPsPerS = 1e12;

}  // namespace

AttackSchedule schedule_from_json(const json& doc, Direction default_direction,
                                  const std::string& path) {
  if (!doc.is_object() || !doc.contains("variant")) {
    throw std::invalid_argument("config field '" + path +
                                "': expected an object with a 'variant' key");
  }
  const std::string variant = jf::string(doc["variant"], path + ".variant");
  auto direction = [&](const json& obj, const std::string& p) {
    if (!obj.contains("direction")) return default_direction;
    return wrap(p + ".direction",
                [&] { return parse_direction(jf::string(obj["direction"], p + ".direction")); });
  };

  if (variant == "none") {
    jf::reject_unknown(doc, {"variant"}, path);
    return NoAttack{};
  }
  if (variant == "equal_interval") {
    jf::reject_unknown(doc, {"variant", "interval_epochs", "delay", "direction"}, path);
    EqualIntervalAttack eq;
    if (doc.contains("interval_epochs")) {
      eq.interval_epochs = jf::integer(doc["interval_epochs"], path + ".interval_epochs");
    }
    if (!doc.contains("delay")) {
      throw std::invalid_argument("config field '" + path + ".delay': required");
    }
    eq.delay = jf::picoseconds(doc["delay"], path + ".delay");
    eq.direction = direction(doc, path);
    return eq;
  }
  if (variant == "random") {
    jf::reject_unknown(doc, {"variant", "table", "start_epoch"}, path);
    if (!doc.contains("table") || !doc["table"].is_array()) {
      throw std::invalid_argument("config field '" + path + ".table': expected an array");
    }
    RandomAttack rnd;
    if (doc.contains("start_epoch")) {
      rnd.start_epoch = jf::integer(doc["start_epoch"], path + ".start_epoch");
    }
    for (std::size_t i = 0; i < doc["table"].size(); ++i) {
      const json& row = doc["table"][i];
      const std::string p = path + ".table[" + std::to_string(i) + "]";
      jf::reject_unknown(row, {"probability", "delay", "direction"}, p);
      if (!row.contains("probability") || !row.contains("delay")) {
        throw std::invalid_argument("config field '" + p +
                                    "': probability and delay are required");
      }
      rnd.table.push_back({jf::number(row["probability"], p + ".probability"),
                           jf::picoseconds(row["delay"], p + ".delay"),
                           direction(row, p)});
    }
    return rnd;
  }
  throw std::invalid_argument("config field '" + path + ".variant': unknown variant '" +
                              variant + "' (expected none, equal_interval or random)");
}

json schedule_to_json(const AttackSchedule& schedule) {
  if (const auto* eq = std::get_if<EqualIntervalAttack>(&schedule)) {
    return {{"variant", "equal_interval"},
            {"interval_epochs", eq->interval_epochs},
            {"delay", ps(eq->delay)},
            {"direction", std::string(to_string(eq->direction))}};
  }
  if (const auto* rnd = std::get_if<RandomAttack>(&schedule)) {
    json table = json::array();
    for (const auto& row : rnd->table) {
      table.push_back({{"probability", row.probability},
                       {"delay", ps(row.delay)},
                       {"direction", std::string(to_string(row.direction))}});
    }
    return {{"variant", "random"}, {"table", table}, {"start_epoch", rnd->start_epoch}};
  }
  return {{"variant", "none"}};
}

ScenarioConfig scenario_from_json(const json& doc, const ScenarioConfig& base) {
  jf::reject_unknown(doc,
                     {"duration_epochs", "tau", "clock_noise", "channel", "schedule",
                      "strategy", "detector", "seed", "initial_theta",
                      "initial_gamma"},
                     "");
  ScenarioConfig c = base;
  if (doc.contains("duration_epochs")) {
    c.duration_epochs = jf::integer(doc["duration_epochs"], "duration_epochs");
  }
  if (doc.contains("tau")) c.tau = jf::picoseconds(doc["tau"], "tau");
  if (doc.contains("clock_noise")) {
    const json& n = doc["clock_noise"];
    jf::reject_unknown(n, {"sigma_theta", "sigma_gamma"}, "clock_noise");
    if (n.contains("sigma_theta")) {
      c.clock_noise.sigma_theta = jf::picoseconds(n["sigma_theta"], "clock_noise.sigma_theta");
    }
    if (n.contains("sigma_gamma")) {
      c.clock_noise.sigma_gamma =
          jf::number(n["sigma_gamma"], "clock_noise.sigma_gamma") / kPsPerS;
    }
  }
  if (doc.contains("channel")) {
    const json& ch = doc["channel"];
    jf::reject_unknown(
        ch, {"prop_delay_ab", "prop_delay_ba", "sigma_m", "sigma_d", "noise_model"},
        "channel");
    if (ch.contains("prop_delay_ab")) {
      c.channel.prop_delay_ab = jf::picoseconds(ch["prop_delay_ab"], "channel.prop_delay_ab");
    }
    if (ch.contains("prop_delay_ba")) {
      c.channel.prop_delay_ba = jf::picoseconds(ch["prop_delay_ba"], "channel.prop_delay_ba");
    }
    if (ch.contains("sigma_m")) c.channel.sigma_m = jf::picoseconds(ch["sigma_m"], "channel.sigma_m");
    if (ch.contains("sigma_d")) c.channel.sigma_d = jf::picoseconds(ch["sigma_d"], "channel.sigma_d");
    if (ch.contains("noise_model")) {
      c.channel.noise_model = wrap("channel.noise_model", [&] {
        return parse_noise_model(jf::string(ch["noise_model"], "channel.noise_model"));
      });
    }
  }
  if (doc.contains("schedule")) {
    c.schedule = schedule_from_json(doc["schedule"], Direction::kBToA, "schedule");
  }
  if (doc.contains("strategy")) {
    c.strategy = wrap("strategy",
                      [&] { return parse_strategy(jf::string(doc["strategy"], "strategy")); });
  }
  if (doc.contains("detector")) {
    const json& d = doc["detector"];
    jf::reject_unknown(d, {"threshold", "weight", "warmup_epochs", "predict_with_gamma_e"},
                       "detector");
    if (d.contains("threshold")) {
      c.detector.threshold = jf::picoseconds(d["threshold"], "detector.threshold");
    }
    if (d.contains("weight")) c.detector.weight = jf::number(d["weight"], "detector.weight");
    if (d.contains("warmup_epochs")) {
      c.detector.warmup_epochs =
          static_cast<int>(jf::integer(d["warmup_epochs"], "detector.warmup_epochs"));
    }
    if (d.contains("predict_with_gamma_e")) {
      c.detector.predict_with_gamma_e =
          jf::boolean(d["predict_with_gamma_e"], "detector.predict_with_gamma_e");
    }
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw std::invalid_argument("config field 'seed': expected a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("initial_theta")) {
    c.initial_theta = jf::picoseconds(doc["initial_theta"], "initial_theta");
  }
  if (doc.contains("initial_gamma")) {
    c.initial_gamma = jf::number(doc["initial_gamma"], "initial_gamma") / kPsPerS;
  }
  wrap("<scenario>", [&] {
    validate(c);
    return 0;
  });
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  return {
      {"duration_epochs", c.duration_epochs},
      {"tau", ps(c.tau)},
      {"clock_noise",
       {{"sigma_theta", ps(c.clock_noise.sigma_theta)},
        {"sigma_gamma", c.clock_noise.sigma_gamma * kPsPerS}}},
      {"channel",
       {{"prop_delay_ab", ps(c.channel.prop_delay_ab)},
        {"prop_delay_ba", ps(c.channel.prop_delay_ba)},
        {"sigma_m", ps(c.channel.sigma_m)},
        {"sigma_d", ps(c.channel.sigma_d)},
        {"noise_model", std::string(to_string(c.channel.noise_model))}}},
      {"schedule", schedule_to_json(c.schedule)},
      {"strategy", std::string(to_string(c.strategy))},
      {"detector",
       {{"threshold", ps(c.detector.threshold)},
        {"weight", c.detector.weight},
        {"warmup_epochs", c.detector.warmup_epochs},
        {"predict_with_gamma_e", c.detector.predict_with_gamma_e}}},
      {"seed", c.seed},
      {"initial_theta", ps(c.initial_theta)},
      {"initial_gamma", c.initial_gamma * kPsPerS},
  };
}

json load_json_file(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (!fs::exists(p) && p.is_relative()) {
    if (const char* dir = std::getenv("TWTT_CONFIG_DIR")) {
      if (fs::exists(fs::path(dir) / p)) p = fs::path(dir) / p;
    }
  }
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace twtt
