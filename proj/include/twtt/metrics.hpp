#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace twtt {

// Uniformly sampled time-error series.
struct TimeErrorSeries {
  std::vector<double> samples;  // x_i [s]
  double tau0 = 1.0;            // sample spacing [s]
};

void validate(const TimeErrorSeries& series);

// Time deviation at tau = n * tau0:
//   sqrt( 1/(6 n^2 (N-3n+1)) * sum_{j=0}^{N-3n} [ sum_{i=j}^{j+n-1}
//         (x_{i+2n} - 2 x_{i+n} + x_i) ]^2 )
// Requires 1 <= n and N >= 3n; throws std::out_of_range otherwise.
double tdev(const TimeErrorSeries& series, std::int64_t n);

// Maximum time interval error at tau = n * tau0, anchored at each window
// start:
//   max_{i=0}^{N-n-1} max_{k=1}^{n} |x_{i+k} - x_i|
// Requires 1 <= n <= N-1.
double mtie(const TimeErrorSeries& series, std::int64_t n);

// Reference O(N n) evaluation of the MTIE formula. mtie() must agree exactly.
double mtie_naive(const TimeErrorSeries& series, std::int64_t n);

std::int64_t max_tdev_n(std::size_t sample_count);

enum class Metric { kTdev, kMtie };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

struct CurvePoint {
  double tau = 0.0;    // [s]
  double value = 0.0;  // [s]
};

struct StabilityCurve {
  std::vector<CurvePoint> points;
};

// One point per averaging factor; factors must be strictly increasing.
StabilityCurve stability_curve(const TimeErrorSeries& series, Metric metric,
                               std::span<const std::int64_t> factors);

// Per-epoch confusion counts. Ratios with a zero denominator are empty,
// meaning "not applicable".
struct DetectionTally {
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t true_negatives = 0;
  std::optional<double> precision;
  std::optional<double> recall;
};

DetectionTally precision_recall(const std::vector<bool>& actual,
                                const std::vector<bool>& detected);

}  // namespace twtt
