#include "twtt/clock.hpp"

#include <cmath>
#include <stdexcept>

namespace twtt {

void validate(const ClockState& state) {
  if (!(state.tau > 0.0) || !std::isfinite(state.tau)) {
    throw std::invalid_argument("clock: tau must be finite and > 0");
  }
  if (!std::isfinite(state.theta) || !std::isfinite(state.gamma)) {
    throw std::invalid_argument("clock: theta and gamma must be finite");
  }
  if (state.epoch_index < 0) {
    throw std::invalid_argument("clock: epoch_index must be >= 0");
  }
}

void validate(const ClockNoiseParams& noise) {
  if (!(noise.sigma_theta >= 0.0) || !std::isfinite(noise.sigma_theta) ||
      !(noise.sigma_gamma >= 0.0) || !std::isfinite(noise.sigma_gamma)) {
    throw std::invalid_argument("clock: noise sigmas must be finite and >= 0");
  }
}

ClockState init_clock(double theta0, double gamma0, double tau) {
  ClockState s{theta0, gamma0, 0, tau};
  validate(s);
  return s;
}

ClockState step_clock(const ClockState& state, const ClockNoiseParams& noise,
                      double u_theta, RandomStream& rng) {
  if (!std::isfinite(u_theta)) {
    throw std::invalid_argument("clock: correction u_theta must be finite");
  }
  const double w_theta = rng.gaussian(noise.sigma_theta);
  const double w_gamma = rng.gaussian(noise.sigma_gamma * std::sqrt(state.tau));

  ClockState next = state;
  next.theta = state.theta + u_theta + state.gamma * state.tau + w_theta;
  next.gamma = state.gamma + w_gamma;
  next.epoch_index = state.epoch_index + 1;
  return next;
}

}  // namespace twtt
