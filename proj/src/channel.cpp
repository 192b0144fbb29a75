#include "twtt/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace twtt {

std::string_view to_string(Direction d) {
  return d == Direction::kBToA ? "B_to_A" : "A_to_B";
}

Direction parse_direction(std::string_view s) {
  if (s == "B_to_A") return Direction::kBToA;
  if (s == "A_to_B") return Direction::kAToB;
  throw std::invalid_argument("unknown direction '" + std::string(s) +
                              "' (expected B_to_A or A_to_B)");
}

std::string_view to_string(NoiseModel m) {
  return m == NoiseModel::kWhite ? "white" : "random_walk";
}

NoiseModel parse_noise_model(std::string_view s) {
  if (s == "white") return NoiseModel::kWhite;
  if (s == "random_walk") return NoiseModel::kRandomWalk;
  throw std::invalid_argument("unknown noise_model '" + std::string(s) +
                              "' (expected white or random_walk)");
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void validate_delay(double delay) {
  if (!finite_nonneg(delay)) {
    throw std::invalid_argument("attack delay must be finite and >= 0");
  }
}

}  // namespace

void validate(const ChannelParams& p) {
  if (!finite_nonneg(p.prop_delay_ab) || !finite_nonneg(p.prop_delay_ba)) {
    throw std::invalid_argument("channel: propagation delays must be >= 0");
  }
  if (!finite_nonneg(p.sigma_m) || !finite_nonneg(p.sigma_d)) {
    throw std::invalid_argument("channel: noise sigmas must be >= 0");
  }
}

double RandomAttack::no_attack_probability() const {
  double sum = 0.0;
  for (const auto& row : table) sum += row.probability;
  return 1.0 - sum;
}

void validate(const AttackSchedule& schedule) {
  if (const auto* eq = std::get_if<EqualIntervalAttack>(&schedule)) {
    if (eq->interval_epochs < 1) {
      throw std::invalid_argument("schedule: interval_epochs must be >= 1");
    }
    validate_delay(eq->delay);
  } else if (const auto* rnd = std::get_if<RandomAttack>(&schedule)) {
    if (rnd->start_epoch < 0) {
      throw std::invalid_argument("schedule: start_epoch must be >= 0");
    }
    double sum = 0.0;
    for (const auto& row : rnd->table) {
      if (!std::isfinite(row.probability) || row.probability < 0.0) {
        throw std::invalid_argument("schedule: probabilities must be >= 0");
      }
      validate_delay(row.delay);
      sum += row.probability;
    }
    if (sum > 1.0 + 1e-12) {
      throw std::invalid_argument("schedule: probabilities sum above 1");
    }
  }
}

std::optional<AttackEvent> draw_attack(const AttackSchedule& schedule,
                                       std::int64_t epoch_index,
                                       RandomStream& rng) {
  if (const auto* eq = std::get_if<EqualIntervalAttack>(&schedule)) {
    if (epoch_index > 0 && epoch_index % eq->interval_epochs == 0) {
      return AttackEvent{epoch_index, eq->delay, eq->direction};
    }
    return std::nullopt;
  }
  if (const auto* rnd = std::get_if<RandomAttack>(&schedule)) {
    const double u = rng.uniform();
    if (epoch_index < rnd->start_epoch) return std::nullopt;
    double cumulative = 0.0;
    for (const auto& row : rnd->table) {
      cumulative += row.probability;
      if (u < cumulative) {
        return AttackEvent{epoch_index, row.delay, row.direction};
      }
    }
  }
  return std::nullopt;
}

ChannelNoise draw_channel_noise(const ChannelParams& params, RandomStream& rng,
                                ChannelWalk* walk) {
  ChannelNoise n;
  n.trans_ba = rng.gaussian(params.sigma_d);
  n.trans_ab = rng.gaussian(params.sigma_d);
  n.tic_a = rng.gaussian(params.sigma_m);
  n.tic_b = rng.gaussian(params.sigma_m);
  if (params.noise_model == NoiseModel::kRandomWalk) {
    if (walk == nullptr) {
      throw std::invalid_argument(
          "channel: random_walk noise requires a ChannelWalk accumulator");
    }
    walk->trans_ba += n.trans_ba;
    walk->trans_ab += n.trans_ab;
    walk->tic_a += n.tic_a;
    walk->tic_b += n.tic_b;
    n = ChannelNoise{walk->trans_ba, walk->trans_ab, walk->tic_a, walk->tic_b};
  }
  return n;
}

double measured_offset(double delta_t_a, double delta_t_b) {
  return (delta_t_b - delta_t_a) / 2.0;
}

TwoWayMeasurement simulate_exchange(const ClockState& clock,
                                    const ChannelParams& params,
                                    const std::optional<AttackEvent>& attack,
                                    RandomStream& rng, ChannelWalk* walk) {
  double attack_ba = 0.0;
  double attack_ab = 0.0;
  if (attack) {
    validate_delay(attack->delay);
    if (attack->epoch_index != clock.epoch_index) {
      throw std::invalid_argument("channel: attack epoch does not match clock");
    }
    (attack->direction == Direction::kBToA ? attack_ba : attack_ab) =
        attack->delay;
  }
  const ChannelNoise n = draw_channel_noise(params, rng, walk);

  TwoWayMeasurement m;
  m.epoch_index = clock.epoch_index;
  m.delta_t_a = clock.theta + params.prop_delay_ba + attack_ba + n.trans_ba +
                n.tic_a;
  m.delta_t_b = -clock.theta + params.prop_delay_ab + attack_ab + n.trans_ab +
                n.tic_b;
  m.theta_m = measured_offset(m.delta_t_a, m.delta_t_b);
  return m;
}

}  // namespace twtt
