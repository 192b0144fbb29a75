#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twtt/clock.hpp"
#include "twtt/random.hpp"

namespace twtt {

enum class Direction { kBToA, kAToB };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

// How the measurement and transmission noise terms evolve between epochs.
enum class NoiseModel {
  kWhite,       // i.i.d. per epoch
  kRandomWalk,  // each term accumulates its per-epoch increments
};

std::string_view to_string(NoiseModel m);
NoiseModel parse_noise_model(std::string_view s);

struct ChannelParams {
  double prop_delay_ab = 50e-6;  // nominal A -> B propagation [s]
  double prop_delay_ba = 50e-6;  // nominal B -> A propagation [s]
  double sigma_m = 25e-12;       // TIC measurement noise per reading [s]
  double sigma_d = 10e-12;       // transmission noise per direction [s]
  NoiseModel noise_model = NoiseModel::kWhite;

  bool operator==(const ChannelParams&) const = default;
};

void validate(const ChannelParams& params);

struct AttackEvent {
  std::int64_t epoch_index = 0;
  double delay = 0.0;  // extra one-way delay [s], >= 0
  Direction direction = Direction::kBToA;

  bool operator==(const AttackEvent&) const = default;
};

struct NoAttack {
  bool operator==(const NoAttack&) const = default;
};

struct EqualIntervalAttack {
  std::int64_t interval_epochs = 50;
  double delay = 0.0;
  Direction direction = Direction::kBToA;

  bool operator==(const EqualIntervalAttack&) const = default;
};

struct AttackRow {
  double probability = 0.0;
  double delay = 0.0;
  Direction direction = Direction::kBToA;

  bool operator==(const AttackRow&) const = default;
};

// Each epoch selects at most one row; the residual probability is "no attack".
// Epochs before start_epoch still consume their draw but are never attacked,
// which keeps the detector's warm-up clean.
struct RandomAttack {
  std::vector<AttackRow> table;
  std::int64_t start_epoch = 2;

  double no_attack_probability() const;
  bool operator==(const RandomAttack&) const = default;
};

using AttackSchedule = std::variant<NoAttack, EqualIntervalAttack, RandomAttack>;

void validate(const AttackSchedule& schedule);

// Equal-interval schedules fire at every positive multiple of the interval
// and consume no randomness. Random schedules consume exactly one uniform
// variate per call whether or not an attack is drawn.
std::optional<AttackEvent> draw_attack(const AttackSchedule& schedule,
                                       std::int64_t epoch_index,
                                       RandomStream& rng);

struct TwoWayMeasurement {
  std::int64_t epoch_index = 0;
  double delta_t_a = 0.0;  // TIC reading at A [s]
  double delta_t_b = 0.0;  // TIC reading at B [s]
  double theta_m = 0.0;    // (delta_t_b - delta_t_a) / 2 [s]

  bool operator==(const TwoWayMeasurement&) const = default;
};

// Accumulators for NoiseModel::kRandomWalk.
struct ChannelWalk {
  double trans_ba = 0.0;
  double trans_ab = 0.0;
  double tic_a = 0.0;
  double tic_b = 0.0;
};

// The four noise terms of one exchange, drawn in the fixed order
// B->A transmission, A->B transmission, TIC at A, TIC at B.
struct ChannelNoise {
  double trans_ba = 0.0;
  double trans_ab = 0.0;
  double tic_a = 0.0;
  double tic_b = 0.0;
};

// `walk` is required for the random-walk model and ignored otherwise.
ChannelNoise draw_channel_noise(const ChannelParams& params, RandomStream& rng,
                                ChannelWalk* walk);

double measured_offset(double delta_t_a, double delta_t_b);

// One two-way exchange with theta = local(B) - remote(A):
//   delta_t_a =  theta + prop_delay_ba [+ attack if B->A] + noise
//   delta_t_b = -theta + prop_delay_ab [+ attack if A->B] + noise
// so theta_m = -theta absent noise and attack, and a B->A attack of delay d
// shifts theta_m by -d/2.
TwoWayMeasurement simulate_exchange(const ClockState& clock,
                                    const ChannelParams& params,
                                    const std::optional<AttackEvent>& attack,
                                    RandomStream& rng,
                                    ChannelWalk* walk = nullptr);

}  // namespace twtt
