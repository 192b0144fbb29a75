#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace twtt {

struct DetectorConfig {
  double threshold = 100e-12;  // I_threshold [s]
  double weight = 0.1;         // w, blend weight of the fresh skew estimate
  int warmup_epochs = 2;       // attack-free epochs used to seed gamma_best
  // Predict with the step-2 skew estimate instead of gamma_best(t_{n-1}).
  // Off by default; see README.
  bool predict_with_gamma_e = false;

  bool operator==(const DetectorConfig&) const = default;
};

void validate(const DetectorConfig& cfg);

struct DetectorState {
  double gamma_best_prev = 0.0;   // gamma_best(t_{n-1})
  double gamma_best_prev2 = 0.0;  // gamma_best(t_{n-2})
  double theta_m_prev = 0.0;      // theta_M(t_{n-1}) [s]
  double u_theta_prev = 0.0;      // u_theta(t_{n-1}) [s]
  bool attack_prev = false;       // predict-only correction at t_{n-1}
  bool seeded = false;            // gamma_best history initialized
  std::int64_t epochs_seen = 0;

  bool operator==(const DetectorState&) const = default;
};

struct CorrectionDecision {
  double u_theta = 0.0;
  bool attack_detected = false;
  double i_attack = 0.0;   // |theta_M - offset_f| [s]
  double offset_f = 0.0;   // skew-predicted offset [s]
  std::optional<double> gamma_m;
  double gamma_e = 0.0;
  double gamma_best = 0.0;  // gamma_best(t_n) after this step
  bool measurement_missing = false;
  bool warmup = false;

  bool operator==(const CorrectionDecision&) const = default;
};

struct DetectStep {
  CorrectionDecision decision;
  DetectorState state;
};

// One epoch of the skew-model attack detector.
//
//   gamma_M  = (theta_M - theta_M_prev + u_prev) / tau  if no attack at t_{n-1}
//   offset_F = gamma_best_prev * tau
//   I_attack = |theta_M - offset_F|
//   I_attack > threshold:  u = offset_F,  gamma_best = w*prev + (1-w)*prev2
//   otherwise:             u = theta_M,   gamma_best = w*gamma_M + (1-w)*prev
//
// When gamma_M is unavailable (the previous epoch was predict-only) the
// otherwise-branch blends gamma_E, which equals gamma_best_prev. Detection is
// suppressed until warmup_epochs have elapsed and the history has been seeded
// from the first available gamma_M.
DetectStep detect_step(const DetectorState& state, double theta_m, double tau,
                       const DetectorConfig& cfg);

// Epoch without a measurement: predict-only correction u = offset_F, handled
// like a detected attack for the state history but flagged separately.
DetectStep detect_missing(const DetectorState& state, double tau,
                          const DetectorConfig& cfg);

// Baseline strategy: apply the measured offset directly.
CorrectionDecision direct_step(double theta_m);

enum class Strategy { kDirect, kDetect };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

// Per-link correction loop for either strategy.
class Corrector {
 public:
  Corrector(Strategy strategy, DetectorConfig cfg, double tau);

  // `theta_m` is empty for an epoch whose measurement never arrived.
  CorrectionDecision step(std::optional<double> theta_m);

  const DetectorState& state() const { return state_; }
  Strategy strategy() const { return strategy_; }

 private:
  Strategy strategy_;
  DetectorConfig cfg_;
  double tau_;
  DetectorState state_;
};

}  // namespace twtt
