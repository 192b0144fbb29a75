#include "twtt/harness.hpp"

#include <cmath>
#include <stdexcept>

#include "twtt/random.hpp"
#include "twtt/units.hpp"

namespace twtt {

void validate(const ScenarioConfig& config) {
  if (config.duration_epochs < 1) {
    throw std::invalid_argument("scenario: duration_epochs must be >= 1");
  }
  if (!(config.tau > 0.0) || !std::isfinite(config.tau)) {
    throw std::invalid_argument("scenario: tau must be finite and > 0");
  }
  if (!std::isfinite(config.initial_theta) ||
      !std::isfinite(config.initial_gamma)) {
    throw std::invalid_argument(
        "scenario: initial_theta and initial_gamma must be finite");
  }
  validate(config.clock_noise);
  validate(config.channel);
  validate(config.schedule);
  validate(config.detector);
}

TraceRecord make_record(std::int64_t epoch_index, double tau, double theta_true,
                        double theta_m, const CorrectionDecision& decision,
                        double attack_true_delay) {
  TraceRecord r;
  r.epoch_index = epoch_index;
  r.time_s = static_cast<double>(epoch_index) * tau;
  r.theta_true = theta_true;
  r.theta_m = theta_m;
  r.u_theta = decision.u_theta;
  r.offset_f = decision.offset_f;
  r.i_attack = decision.i_attack;
  r.gamma_best = decision.gamma_best;
  r.gamma_e = decision.gamma_e;
  r.attack_true_delay = attack_true_delay;
  r.attack_detected = decision.attack_detected;
  r.measurement_missing = decision.measurement_missing;
  return r;
}

std::vector<TraceRecord> run_scenario(const ScenarioConfig& config) {
  validate(config);
  RandomStream clock_rng = RandomStream::derive(config.seed, StreamId::kClock);
  RandomStream channel_rng = RandomStream::derive(config.seed, StreamId::kChannel);
  RandomStream attack_rng = RandomStream::derive(config.seed, StreamId::kAttack);

  ClockState clock =
      init_clock(config.initial_theta, config.initial_gamma, config.tau);
  ChannelWalk walk;
  Corrector corrector(config.strategy, config.detector, config.tau);

  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(config.duration_epochs));
  for (std::int64_t n = 0; n < config.duration_epochs; ++n) {
    const auto attack = draw_attack(config.schedule, n, attack_rng);
    const TwoWayMeasurement m =
        simulate_exchange(clock, config.channel, attack, channel_rng, &walk);
    const CorrectionDecision d = corrector.step(m.theta_m);
    clock = step_clock(clock, config.clock_noise, d.u_theta, clock_rng);
    trace.push_back(make_record(n, config.tau, clock.theta, m.theta_m, d,
                                attack ? attack->delay : 0.0));
  }
  return trace;
}

namespace {

ScenarioConfig table1_base(std::int64_t duration) {
  ScenarioConfig c;
  c.duration_epochs = duration;
  return c;  // defaults already carry the reference noise levels
}

ScenarioConfig equal_interval(std::int64_t duration, double delay) {
  ScenarioConfig c = table1_base(duration);
  c.schedule = EqualIntervalAttack{50, delay, Direction::kBToA};
  return c;
}

ScenarioConfig random_attack(std::vector<AttackRow> rows) {
  ScenarioConfig c = table1_base(600);
  c.schedule = RandomAttack{std::move(rows)};
  return c;
}

struct PresetEntry {
  const char* name;
  ScenarioConfig (*make)();
};

// Simulation presets are named by the induced offset error (half the
// injected delay); experiment presets by the injected delay itself.
const PresetEntry kPresets[] = {
    {"sim-noattack", [] { return table1_base(1000); }},
    {"sim-attack-1ns-error", [] { return equal_interval(1000, ps_to_seconds(2000)); }},
    {"sim-attack-0.5ns-error", [] { return equal_interval(1000, ps_to_seconds(1000)); }},
    {"sim-attack-0.2ns-error", [] { return equal_interval(1000, ps_to_seconds(400)); }},
    {"exp-equal-0.296ns", [] { return equal_interval(600, ps_to_seconds(296)); }},
    {"exp-equal-0.83ns", [] { return equal_interval(600, ps_to_seconds(830)); }},
    {"exp-equal-1.25ns", [] { return equal_interval(600, ps_to_seconds(1250)); }},
    {"exp-random-0.83ns",
     [] { return random_attack({{0.2, ps_to_seconds(830), Direction::kBToA}}); }},
    {"exp-random-0.296ns",
     [] { return random_attack({{0.2, ps_to_seconds(296), Direction::kBToA}}); }},
    {"exp-random-mixed",
     [] {
       return random_attack({{0.15, ps_to_seconds(830), Direction::kBToA},
                             {0.15, ps_to_seconds(296), Direction::kBToA}});
     }},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.make();
  }
  std::string known;
  for (const auto& p : kPresets) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "'; available presets: " + known);
}

}  // namespace twtt
