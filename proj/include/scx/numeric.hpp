#pragma once

#include <cmath>
#include <cstddef>

namespace scx {

// Quota arithmetic on products of decimal fractions and counts. A bare
// std::floor would turn 0.7 * 0.1 * 100 (= 6.999999999999999 in binary)
// into 6; the relative nudge absorbs the few ulps of multiplication error
// without affecting genuinely fractional values.
inline std::size_t floor_count(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(x * (1.0 + 1e-12)));
}

inline std::size_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
}

}  // namespace scx
