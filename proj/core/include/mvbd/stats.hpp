#pragma once

#include <cmath>

namespace mvbd {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

inline double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace mvbd
