#pragma once

#include <cstdint>

#include "twtt/random.hpp"

namespace twtt {

// Local clock relative to the remote reference.
struct ClockState {
  double theta = 0.0;  // time offset local - remote [s]
  double gamma = 0.0;  // fractional frequency skew
  std::int64_t epoch_index = 0;
  double tau = 1.0;  // synchronization interval [s]

  bool operator==(const ClockState&) const = default;
};

// Random-walk noise intensities, expressed per synchronization step.
// sigma_gamma is quoted for a 1 s step and scaled by sqrt(tau / 1 s).
struct ClockNoiseParams {
  double sigma_theta = 10e-12;
  double sigma_gamma = 1e-12;

  bool operator==(const ClockNoiseParams&) const = default;
};

ClockState init_clock(double theta0, double gamma0, double tau);

// One step of the discrete two-state model:
//   theta' = theta + u_theta + gamma * tau + w_theta
//   gamma' = gamma + w_gamma
// Both increments are always drawn, theta noise first, so that the stream
// position does not depend on which sigmas are zero.
ClockState step_clock(const ClockState& state, const ClockNoiseParams& noise,
                      double u_theta, RandomStream& rng);

void validate(const ClockState& state);
void validate(const ClockNoiseParams& noise);

}  // namespace twtt
