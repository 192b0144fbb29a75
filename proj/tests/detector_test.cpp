#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "twtt/channel.hpp"
#include "twtt/clock.hpp"
#include "twtt/detector.hpp"
#include "twtt/random.hpp"

namespace twtt {
namespace {

constexpr double kTau = 1.0;

std::vector<CorrectionDecision> run_open_loop(const std::vector<double>& theta_m,
                                              const DetectorConfig& cfg = {}) {
  Corrector c(Strategy::kDetect, cfg, kTau);
  std::vector<CorrectionDecision> out;
  for (double v : theta_m) out.push_back(c.step(v));
  return out;
}

// Noise-free closed loop: clock with constant skew, symmetric channel,
// optional attacks, detect strategy.
struct LoopEpoch {
  double theta_before;
  CorrectionDecision d;
};

std::vector<LoopEpoch> run_closed_loop(double gamma, int epochs,
                                       const std::vector<std::optional<AttackEvent>>& attacks,
                                       const DetectorConfig& cfg = {}) {
  ChannelParams ch;
  ch.sigma_m = ch.sigma_d = 0.0;
  ch.prop_delay_ab = ch.prop_delay_ba = 0x1.0p-15;
  const ClockNoiseParams quiet{0.0, 0.0};
  RandomStream rng(1);
  auto clock = init_clock(0.0, gamma, kTau);
  Corrector c(Strategy::kDetect, cfg, kTau);
  std::vector<LoopEpoch> out;
  for (int n = 0; n < epochs; ++n) {
    std::optional<AttackEvent> a;
    if (n < static_cast<int>(attacks.size())) a = attacks[n];
    const auto m = simulate_exchange(clock, ch, a, rng);
    const auto d = c.step(m.theta_m);
    out.push_back({clock.theta, d});
    clock = step_clock(clock, quiet, d.u_theta, rng);
  }
  return out;
}

TEST(DetectStep, ExactSkewSequenceHasZeroIndex) {
  const double g = 0x1.0p-36;
  const auto ds = run_open_loop(std::vector<double>(20, g * kTau));
  for (std::size_t n = 2; n < ds.size(); ++n) {
    EXPECT_EQ(ds[n].i_attack, 0.0) << n;
    EXPECT_FALSE(ds[n].attack_detected) << n;
    EXPECT_EQ(ds[n].u_theta, g * kTau) << n;
    EXPECT_EQ(ds[n].gamma_best, g) << n;
  }
}

TEST(DetectStep, HalfNanosecondShiftDetected) {
  const double g = 0x1.0p-36;
  std::vector<double> seq(20, g * kTau);
  seq[10] += 0.5e-9;
  const auto ds = run_open_loop(seq);
  EXPECT_TRUE(ds[10].attack_detected);
  EXPECT_EQ(ds[10].u_theta, ds[10].offset_f);
  EXPECT_EQ(ds[10].offset_f, g * kTau);
  EXPECT_FALSE(ds[11].gamma_m.has_value());
  EXPECT_EQ(ds[11].gamma_e, ds[10].gamma_best);
  EXPECT_FALSE(ds[11].attack_detected);
  for (std::size_t n = 0; n < ds.size(); ++n) {
    if (n != 10) {
      EXPECT_FALSE(ds[n].attack_detected) << n;
    }
  }
}

TEST(DetectStep, SmallShiftAbsorbed) {
  const double g = 0x1.0p-36;
  std::vector<double> seq(20, g * kTau);
  seq[10] += 0.05e-9;
  const auto ds = run_open_loop(seq);
  EXPECT_FALSE(ds[10].attack_detected);
  EXPECT_EQ(ds[10].u_theta, seq[10]);
  EXPECT_NEAR(ds[10].i_attack, 0.05e-9, 1e-24);
}

TEST(DetectStep, IndexIsAbsoluteResidual) {
  RandomStream rng(4);
  DetectorConfig cfg;
  DetectorState s;
  for (int n = 0; n < 500; ++n) {
    const double theta_m = rng.gaussian(80e-12);
    const auto r = detect_step(s, theta_m, kTau, cfg);
    ASSERT_GE(r.decision.i_attack, 0.0);
    ASSERT_EQ(r.decision.i_attack, std::fabs(theta_m - r.decision.offset_f));
    if (s.seeded) {
      ASSERT_EQ(r.decision.offset_f, s.gamma_best_prev * kTau);
    }
    if (!r.decision.warmup) {
      ASSERT_EQ(r.decision.attack_detected, r.decision.i_attack > cfg.threshold);
    }
    ASSERT_EQ(r.decision.u_theta,
              r.decision.attack_detected ? r.decision.offset_f : theta_m);
    s = r.state;
  }
}

TEST(DetectStep, WarmupSuppressesDetection) {
  const auto ds = run_open_loop({5e-9, -7e-9, 0.0});
  EXPECT_TRUE(ds[0].warmup);
  EXPECT_TRUE(ds[1].warmup);
  EXPECT_FALSE(ds[0].attack_detected);
  EXPECT_FALSE(ds[1].attack_detected);
  EXPECT_EQ(ds[0].u_theta, 5e-9);
  EXPECT_EQ(ds[1].u_theta, -7e-9);
  EXPECT_FALSE(ds[0].gamma_m.has_value());
  ASSERT_TRUE(ds[1].gamma_m.has_value());
  EXPECT_EQ(*ds[1].gamma_m, (-7e-9 - 5e-9 + 5e-9) / kTau);
  EXPECT_EQ(ds[1].gamma_best, *ds[1].gamma_m);
  EXPECT_FALSE(ds[2].warmup);
}

TEST(DetectStep, SeedsBothHistorySlots) {
  DetectorState s;
  DetectorConfig cfg;
  s = detect_step(s, 3e-11, kTau, cfg).state;
  s = detect_step(s, 5e-11, kTau, cfg).state;
  EXPECT_TRUE(s.seeded);
  EXPECT_EQ(s.gamma_best_prev, 5e-11);
  EXPECT_EQ(s.gamma_best_prev2, 5e-11);
}

TEST(DetectStep, IsPure) {
  DetectorState s;
  s.gamma_best_prev = 2e-11;
  s.gamma_best_prev2 = 1e-11;
  s.theta_m_prev = 4e-11;
  s.u_theta_prev = 4e-11;
  s.seeded = true;
  s.epochs_seen = 10;
  const DetectorState copy = s;
  const auto a = detect_step(s, 7e-10, kTau, DetectorConfig{});
  const auto b = detect_step(s, 7e-10, kTau, DetectorConfig{});
  EXPECT_EQ(s, copy);
  EXPECT_EQ(a.decision, b.decision);
  EXPECT_EQ(a.state, b.state);
  EXPECT_TRUE(a.decision.attack_detected);
  EXPECT_EQ(a.state.gamma_best_prev, 1e-11 + 0.1 * (2e-11 - 1e-11));
  EXPECT_EQ(a.state.gamma_best_prev2, 2e-11);
}

TEST(DetectStep, BlendFollowsWeight) {
  DetectorState s;
  s.gamma_best_prev = 2e-11;
  s.gamma_best_prev2 = 2e-11;
  s.theta_m_prev = 0.0;
  s.u_theta_prev = 0.0;
  s.seeded = true;
  s.epochs_seen = 5;
  DetectorConfig cfg;
  cfg.weight = 0.25;
  const auto r = detect_step(s, 6e-11, kTau, cfg);
  ASSERT_FALSE(r.decision.attack_detected);
  EXPECT_EQ(*r.decision.gamma_m, 6e-11);
  EXPECT_DOUBLE_EQ(r.decision.gamma_best, 0.25 * 6e-11 + 0.75 * 2e-11);
}

TEST(DetectStep, ScaleConsistentVerdicts) {
  RandomStream rng(21);
  std::vector<double> seq;
  for (int n = 0; n < 400; ++n) {
    double v = 3e-11 + rng.gaussian(30e-12);
    if (n % 37 == 0 && n > 0) v -= 0.4e-9;
    seq.push_back(v);
  }
  const auto base = run_open_loop(seq);
  for (double k : {0.5, 2.0, 1024.0, 0x1.0p-10}) {
    std::vector<double> scaled;
    for (double v : seq) scaled.push_back(v * k);
    DetectorConfig cfg;
    cfg.threshold *= k;
    Corrector c(Strategy::kDetect, cfg, kTau);
    for (std::size_t n = 0; n < seq.size(); ++n) {
      const auto d = c.step(scaled[n]);
      ASSERT_EQ(d.attack_detected, base[n].attack_detected) << "k=" << k << " n=" << n;
      ASSERT_EQ(d.i_attack, base[n].i_attack * k);
    }
  }
}

TEST(ClosedLoop, ZeroIndexAndExactAttackIndex) {
  const double g = 0x1.0p-36;
  const double d = 0x1.0p-30;  // ~0.93 ns
  std::vector<std::optional<AttackEvent>> attacks(60);
  attacks[20] = AttackEvent{20, d, Direction::kBToA};
  attacks[40] = AttackEvent{40, d, Direction::kAToB};
  const auto loop = run_closed_loop(g, 60, attacks);
  const auto clean = run_closed_loop(g, 60, {});
  for (int n = 2; n < 60; ++n) {
    if (n == 20 || n == 40) {
      EXPECT_TRUE(loop[n].d.attack_detected) << n;
      EXPECT_EQ(loop[n].d.i_attack, d / 2) << n;
    } else {
      EXPECT_FALSE(loop[n].d.attack_detected) << n;
      EXPECT_EQ(loop[n].d.i_attack, 0.0) << n;
    }
    // True offset before each measurement matches the attack-free run.
    EXPECT_EQ(loop[n].theta_before, clean[n].theta_before) << n;
    EXPECT_EQ(loop[n].theta_before, g * kTau) << n;
  }
}

TEST(ClosedLoop, ConsecutiveAttacksAllDetected) {
  const double g = -0x1.0p-35;
  const double d = 0x1.0p-31;
  std::vector<std::optional<AttackEvent>> attacks(40);
  for (int n = 10; n < 15; ++n) attacks[n] = AttackEvent{n, d, Direction::kBToA};
  const auto loop = run_closed_loop(g, 40, attacks);
  for (int n = 2; n < 40; ++n) {
    EXPECT_EQ(loop[n].d.attack_detected, n >= 10 && n < 15) << n;
    EXPECT_EQ(loop[n].theta_before, g * kTau) << n;
    EXPECT_EQ(loop[n].d.gamma_best, -g) << n;
  }
}

TEST(ClosedLoop, SubThresholdAttackShiftsClock) {
  const double g = 0x1.0p-36;
  const double d = 0x1.0p-34;  // ~58 ps, so a 29 ps shift
  std::vector<std::optional<AttackEvent>> attacks(30);
  attacks[10] = AttackEvent{10, d, Direction::kBToA};
  const auto loop = run_closed_loop(g, 30, attacks);
  EXPECT_FALSE(loop[10].d.attack_detected);
  EXPECT_EQ(loop[11].theta_before, g * kTau - d / 2);
}

TEST(DetectMissing, PredictOnly) {
  const double g = 0x1.0p-36;
  Corrector c(Strategy::kDetect, DetectorConfig{}, kTau);
  for (int n = 0; n < 5; ++n) c.step(g);
  const auto miss = c.step(std::nullopt);
  EXPECT_TRUE(miss.measurement_missing);
  EXPECT_FALSE(miss.attack_detected);
  EXPECT_EQ(miss.u_theta, g * kTau);
  EXPECT_EQ(miss.offset_f, g * kTau);
  const auto next = c.step(g);
  EXPECT_FALSE(next.gamma_m.has_value());
  EXPECT_FALSE(next.attack_detected);
  EXPECT_EQ(next.i_attack, 0.0);
}

TEST(DirectStep, AppliesMeasurement) {
  EXPECT_EQ(direct_step(3e-9).u_theta, 3e-9);
  const auto z = direct_step(0.0);
  EXPECT_EQ(z.u_theta, 0.0);
  EXPECT_FALSE(z.attack_detected);
  EXPECT_EQ(z.i_attack, 0.0);
  EXPECT_EQ(z.offset_f, 0.0);
  EXPECT_THROW(direct_step(std::nan("")), std::invalid_argument);
}

TEST(Corrector, DirectMissingAppliesNothing) {
  Corrector c(Strategy::kDirect, DetectorConfig{}, kTau);
  const auto d = c.step(std::nullopt);
  EXPECT_EQ(d.u_theta, 0.0);
  EXPECT_TRUE(d.measurement_missing);
}

TEST(DetectorConfig, Validation) {
  DetectorConfig c;
  c.threshold = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.weight = 1.5;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.weight = -0.1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.warmup_epochs = 1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_THROW(Corrector(Strategy::kDetect, DetectorConfig{}, 0.0), std::invalid_argument);
  EXPECT_THROW(detect_step(DetectorState{}, std::nan(""), kTau, DetectorConfig{}),
               std::invalid_argument);
  EXPECT_THROW(detect_step(DetectorState{}, 0.0, -1.0, DetectorConfig{}),
               std::invalid_argument);
}

TEST(Strategy, Parse) {
  EXPECT_EQ(parse_strategy("direct"), Strategy::kDirect);
  EXPECT_EQ(parse_strategy("detect"), Strategy::kDetect);
  EXPECT_EQ(to_string(Strategy::kDetect), "detect");
  EXPECT_THROW(parse_strategy("guess"), std::invalid_argument);
}

}  // namespace
}  // namespace twtt
