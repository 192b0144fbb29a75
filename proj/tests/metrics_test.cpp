#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "twtt/metrics.hpp"
#include "twtt/random.hpp"

namespace twtt {
namespace {

TimeErrorSeries series(std::vector<double> x, double tau0 = 1.0) {
  return TimeErrorSeries{std::move(x), tau0};
}

// Literal evaluation of the TDEV definition.
double tdev_oracle(const std::vector<double>& x, std::int64_t n) {
  const auto N = static_cast<std::int64_t>(x.size());
  long double outer = 0.0L;
  for (std::int64_t j = 0; j <= N - 3 * n; ++j) {
    long double inner = 0.0L;
    for (std::int64_t i = j; i <= n + j - 1; ++i) {
      inner += static_cast<long double>(x[i + 2 * n]) - 2.0L * x[i + n] + x[i];
    }
    outer += inner * inner;
  }
  return static_cast<double>(
      std::sqrt(outer / (6.0L * n * n * static_cast<long double>(N - 3 * n + 1))));
}

double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

TEST(Tdev, MatchesOracleOnRandomSeries) {
  RandomStream rng(8);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto len = 3 + static_cast<std::size_t>(rng.uniform() * 62);  // 3..64
    std::vector<double> x(len);
    const double scale = std::pow(10.0, -12.0 + 3.0 * rng.uniform());
    for (auto& v : x) v = rng.gaussian(scale) + (rng.uniform() < 0.1 ? 5 * scale : 0.0);
    const auto s = series(x);
    for (std::int64_t n = 1; 3 * n <= static_cast<std::int64_t>(len); ++n) {
      const double want = tdev_oracle(x, n);
      ASSERT_LE(rel_err(tdev(s, n), want), 1e-12) << "trial " << trial << " n " << n;
      ++checked;
    }
  }
  EXPECT_GT(checked, 5000);
}

TEST(Tdev, AlternatingSeriesExample) {
  const std::vector<double> x{0, 1, 0, 1, 0, 1, 0};
  const double want = tdev_oracle(x, 1);
  EXPECT_NEAR(want, std::sqrt(4.0 / 6.0), 1e-15);  // every second difference is +-2
  EXPECT_LE(rel_err(tdev(series(x), 1), want), 1e-12);
  EXPECT_LE(rel_err(tdev(series(x), 2), tdev_oracle(x, 2)), 1e-12);
}

TEST(Tdev, ConstantAndAffineAreZero) {
  for (std::int64_t n = 1; n <= 20; ++n) {
    EXPECT_EQ(tdev(series(std::vector<double>(60, 3.7e-9)), n), 0.0);
  }
  std::vector<double> ramp;
  for (int i = 0; i < 90; ++i) ramp.push_back(0x1.0p-30 + i * 0x1.0p-40);
  for (std::int64_t n = 1; n <= 30; ++n) EXPECT_EQ(tdev(series(ramp), n), 0.0) << n;
  std::vector<double> inexact;
  for (int i = 0; i < 90; ++i) inexact.push_back(1.3e-9 + i * 0.7e-12);
  for (std::int64_t n = 1; n <= 30; ++n) EXPECT_LT(tdev(series(inexact), n), 1e-24) << n;
}

TEST(Tdev, TranslationAndAffineInvariance) {
  RandomStream rng(3);
  std::vector<double> x(300);
  for (auto& v : x) v = rng.gaussian(20e-12);
  const auto base = series(x);
  std::vector<double> shifted = x, tilted = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    shifted[i] += 4e-9;
    tilted[i] += 3e-12 * static_cast<double>(i);
  }
  for (std::int64_t n : {1, 3, 10, 50, 100}) {
    const double t = tdev(base, n);
    EXPECT_LE(rel_err(tdev(series(shifted), n), t), 1e-6) << n;
    EXPECT_LE(rel_err(tdev(series(tilted), n), t), 1e-6) << n;
  }
}

TEST(Tdev, ScalesLinearly) {
  RandomStream rng(4);
  std::vector<double> x(200);
  for (auto& v : x) v = rng.gaussian(20e-12);
  for (double k : {2.0, 0.25, 1024.0}) {
    std::vector<double> y = x;
    for (auto& v : y) v *= k;
    for (std::int64_t n : {1, 5, 66}) EXPECT_EQ(tdev(series(y), n), k * tdev(series(x), n));
  }
  std::vector<double> y = x;
  for (auto& v : y) v *= 3.3;
  EXPECT_LE(rel_err(tdev(series(y), 7), 3.3 * tdev(series(x), 7)), 1e-12);
}

TEST(Tdev, PeriodicStepErrorsCancelAtHundred) {
  std::vector<double> clean(1000);
  RandomStream rng(6);
  for (auto& v : clean) v = std::round(rng.gaussian(40.0)) * 0x1.0p-40;
  std::vector<double> attacked = clean;
  for (std::size_t i = 0; i < attacked.size(); i += 50) attacked[i] += 0x1.0p-30;
  EXPECT_EQ(tdev(series(attacked), 100), tdev(series(clean), 100));
  EXPECT_NE(tdev(series(attacked), 10), tdev(series(clean), 10));
}

TEST(Tdev, RangeErrorNamesMaximum) {
  const auto s = series(std::vector<double>(10, 0.0));
  EXPECT_EQ(max_tdev_n(10), 3);
  EXPECT_NO_THROW(tdev(s, 3));
  try {
    tdev(s, 4);
    FAIL() << "expected out_of_range";
  } catch (const std::out_of_range& e) {
    EXPECT_NE(std::string(e.what()).find("1..3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(tdev(s, 0), std::out_of_range);
  EXPECT_THROW(tdev(series({}), 1), std::invalid_argument);
  EXPECT_THROW(tdev(series({1.0, 2.0, 3.0}, 0.0), 1), std::invalid_argument);
}

TEST(Mtie, Examples) {
  const auto s = series({0, 1, 3, 2});
  EXPECT_EQ(mtie(s, 1), 2.0);
  EXPECT_EQ(mtie(s, 3), 3.0);
  EXPECT_EQ(mtie(s, 2), 3.0);
  for (std::int64_t n = 1; n < 40; ++n) {
    EXPECT_EQ(mtie(series(std::vector<double>(40, -2e-9)), n), 0.0);
  }
}

TEST(Mtie, FastEqualsLiteral) {
  RandomStream rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto len = 2 + static_cast<std::size_t>(rng.uniform() * 63);  // 2..64
    std::vector<double> x(len);
    for (auto& v : x) v = rng.gaussian(1e-10);
    if (trial % 5 == 0) {
      for (auto& v : x) v = std::round(v * 1e10);  // many ties
    }
    const auto s = series(x);
    for (std::int64_t n = 1; n < static_cast<std::int64_t>(len); ++n) {
      // Literal oracle, written independently of the library.
      double want = 0.0;
      for (std::int64_t i = 0; i + n < static_cast<std::int64_t>(len); ++i) {
        for (std::int64_t k = 1; k <= n; ++k) want = std::max(want, std::fabs(x[i + k] - x[i]));
      }
      ASSERT_EQ(mtie(s, n), want) << trial << " " << n;
      ASSERT_EQ(mtie_naive(s, n), want);
    }
  }
}

TEST(Mtie, WindowAnchoredAtStartIsNotMonotone) {
  const auto s = series({0, -5, 5});
  EXPECT_EQ(mtie(s, 1), 10.0);
  EXPECT_EQ(mtie(s, 2), 5.0);
}

TEST(Mtie, GrowsWhenWindowAndSeriesGrowTogether) {
  RandomStream rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(2 + static_cast<std::size_t>(rng.uniform() * 80));
    for (auto& v : x) v = rng.gaussian(1.0);
    std::vector<double> head(x.begin(), x.end() - 1);
    for (std::int64_t n = 1; n + 1 < static_cast<std::int64_t>(x.size()); ++n) {
      ASSERT_GE(mtie(series(x), n + 1), mtie(series(head), n));
    }
  }
}

TEST(Mtie, TranslationAndScale) {
  RandomStream rng(13);
  std::vector<double> x(100);
  for (auto& v : x) v = rng.gaussian(30e-12);
  std::vector<double> shifted = x, scaled = x;
  for (auto& v : shifted) v += 2e-9;
  for (auto& v : scaled) v *= 4.0;
  for (std::int64_t n : {1, 10, 99}) {
    EXPECT_LE(rel_err(mtie(series(shifted), n), mtie(series(x), n)), 1e-6);
    EXPECT_EQ(mtie(series(scaled), n), 4.0 * mtie(series(x), n));
  }
}

TEST(Mtie, RangeErrors) {
  const auto s = series({1, 2, 3});
  EXPECT_NO_THROW(mtie(s, 2));
  EXPECT_THROW(mtie(s, 3), std::out_of_range);
  EXPECT_THROW(mtie(s, 0), std::out_of_range);
}

TEST(StabilityCurve, PointwiseComposition) {
  RandomStream rng(14);
  std::vector<double> x(400);
  for (auto& v : x) v = rng.gaussian(20e-12);
  const auto s = series(x, 0.5);
  const std::vector<std::int64_t> ns{1, 10, 100};
  const auto t = stability_curve(s, Metric::kTdev, ns);
  const auto m = stability_curve(s, Metric::kMtie, ns);
  ASSERT_EQ(t.points.size(), 3u);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    EXPECT_EQ(t.points[k].tau, 0.5 * static_cast<double>(ns[k]));
    EXPECT_EQ(t.points[k].value, tdev(s, ns[k]));
    EXPECT_EQ(m.points[k].value, mtie(s, ns[k]));
  }
}

TEST(StabilityCurve, ConstantSeries) {
  const std::vector<std::int64_t> ns{1, 2};
  const auto c = stability_curve(series(std::vector<double>(9, 1.0)), Metric::kTdev, ns);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0].tau, 1.0);
  EXPECT_EQ(c.points[1].tau, 2.0);
  EXPECT_EQ(c.points[0].value, 0.0);
  EXPECT_EQ(c.points[1].value, 0.0);
}

TEST(StabilityCurve, Errors) {
  const auto s = series(std::vector<double>(30, 0.0));
  const std::vector<std::int64_t> unordered{10, 1};
  EXPECT_THROW(stability_curve(s, Metric::kTdev, unordered), std::invalid_argument);
  const std::vector<std::int64_t> too_big{1, 11};
  EXPECT_THROW(stability_curve(s, Metric::kTdev, too_big), std::out_of_range);
  EXPECT_EQ(parse_metric("mtie"), Metric::kMtie);
  EXPECT_THROW(parse_metric("adev"), std::invalid_argument);
}

TEST(PrecisionRecall, Examples) {
  const auto t = precision_recall({true, false, true, false}, {true, false, false, false});
  EXPECT_EQ(t.true_positives, 1);
  EXPECT_EQ(t.false_negatives, 1);
  EXPECT_EQ(t.true_negatives, 2);
  EXPECT_EQ(t.precision, 1.0);
  EXPECT_EQ(t.recall, 0.5);

  const std::vector<bool> same{true, false, false, true, true};
  const auto p = precision_recall(same, same);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
}

TEST(PrecisionRecall, UndefinedRatiosAreEmpty) {
  const auto t = precision_recall({false, false}, {false, false});
  EXPECT_FALSE(t.precision.has_value());
  EXPECT_FALSE(t.recall.has_value());
  const auto fp = precision_recall({false, false}, {true, false});
  EXPECT_EQ(fp.precision, 0.0);
  EXPECT_FALSE(fp.recall.has_value());
  EXPECT_THROW(precision_recall({true}, {true, false}), std::invalid_argument);
}

}  // namespace
}  // namespace twtt
