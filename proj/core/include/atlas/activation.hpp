#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace atlas {

// Compactly supported C2 cubic bump: zero outside (0, 4), peak 2/3 at x = 2.
//   S(x) = x^3 / 6                                         0 <= x < 1
//        = (-3 (x-1)^3 + 3 (x-1)^2 + 3 (x-1) + 1) / 6      1 <= x < 2
//        = ( 3 (x-2)^3 - 6 (x-2)^2 + 4) / 6                2 <= x < 3
//        = (4 - x)^3 / 6                                   3 <= x < 4
//        = 0                                               otherwise
inline double activation(double x) noexcept {
  if (!(x > 0.0 && x < 4.0)) return 0.0;  // also covers NaN
  if (x < 1.0) return x * x * x / 6.0;
  if (x < 2.0) {
    const double t = x - 1.0;
    return (((-3.0 * t + 3.0) * t + 3.0) * t + 1.0) / 6.0;
  }
  if (x < 3.0) {
    const double t = x - 2.0;
    return ((3.0 * t - 6.0) * t * t + 4.0) / 6.0;
  }
  const double t = 4.0 - x;
  return t * t * t / 6.0;
}

// Largest value the activation attains (at x = 2).
inline constexpr double kActivationPeak = 2.0 / 3.0;

// Basis count of a density-rho bank: 2^(rho+2).
inline int bank_size(int rho) {
  if (rho < 0 || rho > 26)
    throw std::invalid_argument("bank_size: density must be in [0, 26]");
  return 1 << (rho + 2);
}

// Density scale w = 2^(rho+2) - 3; basis i of the bank is S(w x + 4 - i).
inline int bank_scale(int rho) { return bank_size(rho) - 3; }

// Width of one basis support in x units, 4 / (2^(rho+2) - 3). Two points of
// [0, 1] farther apart than this share no active basis of the bank.
inline double bank_support_width(int rho) {
  return 4.0 / static_cast<double>(bank_scale(rho));
}

// At most four basis functions of a bank are nonzero at any x: those with
// w x < i < w x + 4. The window stores candidates first_index .. first_index+3
// (1-based, clamped to the bank at the right edge); values[t] holds
// S(w x + 4 - (first_index + t)), zero-padded past `count`. The values of a
// full window sum to one (partition of unity).
struct ActiveWindow {
  int first_index;
  int count;
  std::array<double, 4> values;
};

inline ActiveWindow active_window(int rho, double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("active_window: x outside [0, 1]");
  const int size = bank_size(rho);
  const double wx = static_cast<double>(bank_scale(rho)) * x;
  const int first = static_cast<int>(wx) + 1;  // wx >= 0, truncation = floor
  ActiveWindow win{first, first + 3 <= size ? 4 : size - first + 1,
                   {0.0, 0.0, 0.0, 0.0}};
  for (int t = 0; t < win.count; ++t)
    win.values[t] = activation(wx + 4.0 - static_cast<double>(first + t));
  return win;
}

}  // namespace atlas
