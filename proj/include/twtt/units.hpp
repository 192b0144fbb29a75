#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace twtt {

// All in-process times are double seconds. Files and command lines carry
// integer picoseconds.
inline constexpr double kPicosecond = 1e-12;

inline double ps_to_seconds(std::int64_t ps) {
  // Division by 1e12 is correctly rounded, so seconds_to_ps inverts it.
  return static_cast<double>(ps) / 1e12;
}

inline std::int64_t seconds_to_ps(double seconds) {
  const double ps = seconds * 1e12;
  if (!std::isfinite(ps) || std::fabs(ps) > 9.0e18) {
    throw std::out_of_range("time value not representable in picoseconds: " +
                            std::to_string(seconds));
  }
  return std::llround(ps);
}

}  // namespace twtt
