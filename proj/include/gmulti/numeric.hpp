#pragma once

#include <cmath>

namespace gmulti::detail {

// floor/ceil with a small symmetric guard: values that land within ~1e-9 of an
// integer (from accumulated floating-point rounding in index formulas) snap to
// that integer, so derived indices are identical across platforms.
inline double guarded_floor(double x) { return std::floor(x + 1e-9); }
inline double guarded_ceil(double x) { return std::ceil(x - 1e-9); }

// Falling factorial (x)_j = x (x-1) ... (x-j+1).
inline double falling(double x, int j) {
  double p = 1.0;
  for (int i = 0; i < j; ++i) p *= x - static_cast<double>(i);
  return p;
}

// num/den, where a vanishing numerator wins even if the denominator is 0.
// Used for moment terms whose falling factorials vanish together.
inline double ratio_or_zero(double num, double den) {
  return num == 0.0 ? 0.0 : num / den;
}

}  // namespace gmulti::detail
