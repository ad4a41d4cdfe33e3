#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pcnet {

// Rounds to `digits` significant digits so that the shortest round-trip
// printer emits at most that many.
inline double round_significant(double value, int digits = 12) {
  if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? 0.0 : value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  double out = std::strtod(buf, nullptr);
  return out == 0.0 ? 0.0 : out;
}

}  // namespace pcnet
