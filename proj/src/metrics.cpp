#include "twtt/metrics.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace twtt {

void validate(const TimeErrorSeries& series) {
  if (series.samples.empty()) {
    throw std::invalid_argument("time-error series is empty");
  }
  if (!(series.tau0 > 0.0) || !std::isfinite(series.tau0)) {
    throw std::invalid_argument("time-error series: tau0 must be > 0");
  }
}

std::int64_t max_tdev_n(std::size_t sample_count) {
  return static_cast<std::int64_t>(sample_count / 3);
}

double tdev(const TimeErrorSeries& series, std::int64_t n) {
  validate(series);
  const auto& x = series.samples;
  const auto N = static_cast<std::int64_t>(x.size());
  if (n < 1 || N < 3 * n) {
    throw std::out_of_range("tdev: averaging factor " + std::to_string(n) +
                            " out of range for " + std::to_string(N) +
                            " samples (valid n: 1.." +
                            std::to_string(max_tdev_n(x.size())) + ")");
  }
  auto second_diff = [&](std::int64_t i) {
    return x[i + 2 * n] - 2.0 * x[i + n] + x[i];
  };

  // Running window sum of second differences, refreshed from scratch every
  // n slides so rounding error cannot accumulate over long series.
  double window = 0.0;
  double total = 0.0;
  for (std::int64_t j = 0; j <= N - 3 * n; ++j) {
    if (j % n == 0) {
      window = 0.0;
      for (std::int64_t i = j; i < j + n; ++i) window += second_diff(i);
    } else {
      window += second_diff(j + n - 1) - second_diff(j - 1);
    }
    total += window * window;
  }
  const double nn = static_cast<double>(n);
  return std::sqrt(total / (6.0 * nn * nn * static_cast<double>(N - 3 * n + 1)));
}

namespace {

void check_mtie_range(std::size_t size, std::int64_t n) {
  const auto N = static_cast<std::int64_t>(size);
  if (n < 1 || n > N - 1) {
    throw std::out_of_range("mtie: averaging factor " + std::to_string(n) +
                            " out of range for " + std::to_string(N) +
                            " samples (valid n: 1.." + std::to_string(N - 1) +
                            ")");
  }
}

}  // namespace

double mtie_naive(const TimeErrorSeries& series, std::int64_t n) {
  validate(series);
  const auto& x = series.samples;
  check_mtie_range(x.size(), n);
  const auto N = static_cast<std::int64_t>(x.size());
  double result = 0.0;
  for (std::int64_t i = 0; i <= N - n - 1; ++i) {
    for (std::int64_t k = 1; k <= n; ++k) {
      result = std::max(result, std::fabs(x[i + k] - x[i]));
    }
  }
  return result;
}

double mtie(const TimeErrorSeries& series, std::int64_t n) {
  validate(series);
  const auto& x = series.samples;
  check_mtie_range(x.size(), n);
  const auto N = static_cast<std::int64_t>(x.size());

  // Monotone deques of indices over the window x[i+1 .. i+n].
  std::deque<std::int64_t> hi;
  std::deque<std::int64_t> lo;
  auto push = [&](std::int64_t k) {
    while (!hi.empty() && x[hi.back()] <= x[k]) hi.pop_back();
    hi.push_back(k);
    while (!lo.empty() && x[lo.back()] >= x[k]) lo.pop_back();
    lo.push_back(k);
  };
  for (std::int64_t k = 1; k <= n; ++k) push(k);

  double result = 0.0;
  for (std::int64_t i = 0; i <= N - n - 1; ++i) {
    if (i > 0) {
      push(i + n);
      if (hi.front() <= i) hi.pop_front();
      if (lo.front() <= i) lo.pop_front();
    }
    result = std::max(result, std::fabs(x[hi.front()] - x[i]));
    result = std::max(result, std::fabs(x[lo.front()] - x[i]));
  }
  return result;
}

std::string_view to_string(Metric m) {
  return m == Metric::kTdev ? "tdev" : "mtie";
}

Metric parse_metric(std::string_view s) {
  if (s == "tdev" || s == "TDEV") return Metric::kTdev;
  if (s == "mtie" || s == "MTIE") return Metric::kMtie;
  throw std::invalid_argument("unknown metric '" + std::string(s) +
                              "' (expected tdev or mtie)");
}

StabilityCurve stability_curve(const TimeErrorSeries& series, Metric metric,
                               std::span<const std::int64_t> factors) {
  StabilityCurve curve;
  curve.points.reserve(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k > 0 && factors[k] <= factors[k - 1]) {
      throw std::invalid_argument(
          "stability_curve: averaging factors must be strictly increasing");
    }
    const std::int64_t n = factors[k];
    const double value = metric == Metric::kTdev ? tdev(series, n) : mtie(series, n);
    curve.points.push_back({static_cast<double>(n) * series.tau0, value});
  }
  return curve;
}

DetectionTally precision_recall(const std::vector<bool>& actual,
                                const std::vector<bool>& detected) {
  if (actual.size() != detected.size()) {
    throw std::invalid_argument(
        "precision_recall: length mismatch (" + std::to_string(actual.size()) +
        " actual vs " + std::to_string(detected.size()) + " detected)");
  }
  DetectionTally t;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] && detected[i]) ++t.true_positives;
    else if (!actual[i] && detected[i]) ++t.false_positives;
    else if (actual[i]) ++t.false_negatives;
    else ++t.true_negatives;
  }
  if (const auto d = t.true_positives + t.false_positives; d > 0) {
    t.precision = static_cast<double>(t.true_positives) / static_cast<double>(d);
  }
  if (const auto d = t.true_positives + t.false_negatives; d > 0) {
    t.recall = static_cast<double>(t.true_positives) / static_cast<double>(d);
  }
  return t;
}

}  // namespace twtt
