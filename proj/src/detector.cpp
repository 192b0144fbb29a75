#include "twtt/detector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twtt {

void validate(const DetectorConfig& cfg) {
  if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold)) {
    throw std::invalid_argument("detector: threshold must be finite and > 0");
  }
  if (!(cfg.weight >= 0.0 && cfg.weight <= 1.0)) {
    throw std::invalid_argument("detector: weight must lie in [0, 1]");
  }
  if (cfg.warmup_epochs < 2) {
    throw std::invalid_argument("detector: warmup_epochs must be >= 2");
  }
}

namespace {

void check_inputs(const DetectorState& state, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("detector: tau must be finite and > 0");
  }
  if (!std::isfinite(state.gamma_best_prev) ||
      !std::isfinite(state.gamma_best_prev2) ||
      !std::isfinite(state.theta_m_prev) || !std::isfinite(state.u_theta_prev) ||
      state.epochs_seen < 0) {
    throw std::invalid_argument("detector: state is not finite");
  }
}

// w*fresh + (1-w)*old, written so that fresh == old returns old exactly.
double blend(double fresh, double old, double w) { return old + w * (fresh - old); }

DetectorState advance(const DetectorState& state, double gamma_best,
                      double theta_m, double u_theta, bool predict_only,
                      bool seeded) {
  DetectorState next = state;
  next.gamma_best_prev2 = state.gamma_best_prev;
  next.gamma_best_prev = gamma_best;
  next.theta_m_prev = theta_m;
  next.u_theta_prev = u_theta;
  next.attack_prev = predict_only;
  next.seeded = seeded;
  next.epochs_seen = state.epochs_seen + 1;
  return next;
}

}  // namespace

DetectStep detect_step(const DetectorState& state, double theta_m, double tau,
                       const DetectorConfig& cfg) {
  check_inputs(state, tau);
  validate(cfg);
  if (!std::isfinite(theta_m)) {
    throw std::invalid_argument("detector: theta_m must be finite");
  }
  const double w = cfg.weight;

  CorrectionDecision d;
  if (state.epochs_seen >= 1 && !state.attack_prev) {
    d.gamma_m = (theta_m - state.theta_m_prev + state.u_theta_prev) / tau;
  }

  DetectorState history = state;
  if (!history.seeded && d.gamma_m) {
    history.gamma_best_prev = *d.gamma_m;
    history.gamma_best_prev2 = *d.gamma_m;
    history.seeded = true;
  }
  d.gamma_e = d.gamma_m ? *d.gamma_m : history.gamma_best_prev;
  d.offset_f =
      (cfg.predict_with_gamma_e ? d.gamma_e : history.gamma_best_prev) * tau;
  d.i_attack = std::fabs(theta_m - d.offset_f);
  d.warmup = !history.seeded || state.epochs_seen < cfg.warmup_epochs;

  if (!d.warmup && d.i_attack > cfg.threshold) {
    d.attack_detected = true;
    d.u_theta = d.offset_f;
    d.gamma_best = blend(history.gamma_best_prev, history.gamma_best_prev2, w);
  } else {
    d.u_theta = theta_m;
    d.gamma_best = history.seeded
                       ? blend(d.gamma_e, history.gamma_best_prev, w)
                       : history.gamma_best_prev;
  }
  return {d, advance(history, d.gamma_best, theta_m, d.u_theta,
                     d.attack_detected, history.seeded)};
}

DetectStep detect_missing(const DetectorState& state, double tau,
                          const DetectorConfig& cfg) {
  check_inputs(state, tau);
  validate(cfg);
  const double w = cfg.weight;

  CorrectionDecision d;
  d.measurement_missing = true;
  d.warmup = !state.seeded || state.epochs_seen < cfg.warmup_epochs;
  d.gamma_e = state.gamma_best_prev;
  d.offset_f = state.gamma_best_prev * tau;
  d.u_theta = d.offset_f;
  d.gamma_best = state.seeded
                     ? blend(state.gamma_best_prev, state.gamma_best_prev2, w)
                     : state.gamma_best_prev;
  // theta_m_prev is meaningless after a gap; attack_prev keeps the next
  // epoch from differencing against it.
  return {d, advance(state, d.gamma_best, state.theta_m_prev, d.u_theta,
                     /*predict_only=*/true, state.seeded)};
}

CorrectionDecision direct_step(double theta_m) {
  if (!std::isfinite(theta_m)) {
    throw std::invalid_argument("direct: theta_m must be finite");
  }
  CorrectionDecision d;
  d.u_theta = theta_m;
  return d;
}

std::string_view to_string(Strategy s) {
  return s == Strategy::kDirect ? "direct" : "detect";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "direct") return Strategy::kDirect;
  if (s == "detect") return Strategy::kDetect;
  throw std::invalid_argument("unknown strategy '" + std::string(s) +
                              "' (expected direct or detect)");
}

Corrector::Corrector(Strategy strategy, DetectorConfig cfg, double tau)
    : strategy_(strategy), cfg_(cfg), tau_(tau) {
  validate(cfg_);
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw std::invalid_argument("corrector: tau must be finite and > 0");
  }
}

CorrectionDecision Corrector::step(std::optional<double> theta_m) {
  if (strategy_ == Strategy::kDirect) {
    if (theta_m) return direct_step(*theta_m);
    CorrectionDecision d;  // nothing to apply
    d.measurement_missing = true;
    return d;
  }
  DetectStep r = theta_m ? detect_step(state_, *theta_m, tau_, cfg_)
                         : detect_missing(state_, tau_, cfg_);
  state_ = r.state;
  return r.decision;
}

}  // namespace twtt
