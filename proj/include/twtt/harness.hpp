#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twtt/channel.hpp"
#include "twtt/clock.hpp"
#include "twtt/detector.hpp"

namespace twtt {

struct ScenarioConfig {
  std::int64_t duration_epochs = 600;
  double tau = 1.0;
  ClockNoiseParams clock_noise;
  ChannelParams channel;
  AttackSchedule schedule = NoAttack{};
  Strategy strategy = Strategy::kDetect;
  DetectorConfig detector;
  std::uint64_t seed = 1;
  double initial_theta = 0.0;
  double initial_gamma = 0.0;

  bool operator==(const ScenarioConfig&) const = default;
};

void validate(const ScenarioConfig& config);

// One epoch of a closed-loop run.
struct TraceRecord {
  std::int64_t epoch_index = 0;
  double time_s = 0.0;
  double theta_true = 0.0;  // true offset once the correction is applied and
                            // the clock has run one interval [s]
  double theta_m = 0.0;
  double u_theta = 0.0;
  double offset_f = 0.0;
  double i_attack = 0.0;
  double gamma_best = 0.0;
  double gamma_e = 0.0;
  double attack_true_delay = 0.0;  // 0 when the epoch was not attacked
  bool attack_detected = false;
  bool measurement_missing = false;

  bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_record(std::int64_t epoch_index, double tau, double theta_true,
                        double theta_m, const CorrectionDecision& decision,
                        double attack_true_delay);

// Per epoch: draw attack, exchange, correction step, clock step. Clock noise,
// channel noise and attack draws come from three sub-streams of config.seed.
std::vector<TraceRecord> run_scenario(const ScenarioConfig& config);

std::vector<std::string> preset_names();

// Throws std::invalid_argument listing the known names for an unknown one.
ScenarioConfig preset(std::string_view name);

}  // namespace twtt
